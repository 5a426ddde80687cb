fn main() -> std::process::ExitCode {
    lcstrs::cli::main()
}
