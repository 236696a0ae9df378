use std::process::ExitCode;

fn main() -> ExitCode {
    // Die quietly when the consumer of stdout goes away (e.g. `| head`),
    // like other line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    cmc_spheres::cli::run_from_env()
}
