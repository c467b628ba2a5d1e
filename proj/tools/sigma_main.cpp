#include "sigma/artifact_io.hpp"

int main(int argc, char** argv) { return sigma::cli_main(argc, argv); }
