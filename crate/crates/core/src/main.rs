fn main() -> std::process::ExitCode {
    gicee::cli::main()
}
