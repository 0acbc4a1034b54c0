// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "glyphscape/cli.hpp"

int main(int argc, char** argv) {
  return glyphscape::cli_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
