fn main() -> std::process::ExitCode {
    gaussclone::cli::main_with_args(std::env::args_os())
}
