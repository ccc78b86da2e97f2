#include "epg/cli.hpp"

int main(int argc, char** argv) { return epg::run_cli(argc, argv); }
