fn main() -> std::process::ExitCode {
    pairperm::cli::main()
}
