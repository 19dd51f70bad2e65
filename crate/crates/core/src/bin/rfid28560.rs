fn main() -> std::process::ExitCode {
    rfid28560::cli::main()
}
