fn main() -> std::process::ExitCode {
    anglekit::cli::main()
}
