#include "cli_app.hpp"

int main(int argc, char** argv) { return fockscope::cli::run(argc, argv); }
