#include "reegeom/cli.hpp"

int main(int argc, char** argv) { return reegeom::cli::run(argc, argv); }
