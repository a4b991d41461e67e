fn main() -> std::process::ExitCode {
    detachlab::cli::main()
}
