fn main() -> std::process::ExitCode {
    spt_index::cli::main()
}
