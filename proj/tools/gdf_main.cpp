#include <gdf/cli.hpp>

int main(int argc, char** argv) { return gdf::cli::cli_main(argc, argv); }
