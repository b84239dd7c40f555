// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "pam/harness.hpp"

int main(int argc, char** argv) { return pam::run_cli(argc, argv, std::cout, std::cerr); }
