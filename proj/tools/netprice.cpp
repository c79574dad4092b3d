#include "netprice/cli.hpp"

int main(int argc, char** argv) { return netprice::cli::main_entry(argc, argv); }
