fn main() -> std::process::ExitCode {
    coprod::cli::main()
}
