// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(coinwalk::experiment::cli::run(std::env::args_os()));
}
