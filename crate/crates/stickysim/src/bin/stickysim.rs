fn main() -> std::process::ExitCode {
    stickysim::cli::main()
}
