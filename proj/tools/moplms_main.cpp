#include "moplms/cli.hpp"

int main(int argc, char** argv) { return moplms::run_cli(argc, argv); }
