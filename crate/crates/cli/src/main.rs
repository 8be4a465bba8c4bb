fn main() -> std::process::ExitCode {
    ladder_cli::main_entry()
}
