// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let threads = msprep_cli::threads_from_env();
    if threads > 0 {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let code = msprep_cli::run_args(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
