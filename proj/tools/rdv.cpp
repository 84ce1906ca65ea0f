#include "rdv_cli.hpp"

int main(int argc, char** argv) { return rdv::cli::run(argc, argv); }
