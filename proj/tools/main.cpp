#include "cli_app.hpp"

int main(int argc, char** argv) { return ordfree::cli::run(argc, argv); }
