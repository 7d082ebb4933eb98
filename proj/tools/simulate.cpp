// SPDX-License-Identifier: Apache-2.0

#include "mmwi/cli.hpp"

int main(int argc, char **argv) { return mmwi::cli::run(argc, argv); }
