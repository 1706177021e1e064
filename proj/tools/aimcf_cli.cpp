// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#include <aimcf/cli.hpp>

int main(int argc, char** argv)
{
    return aimcf::run_cli(argc, argv);
}
