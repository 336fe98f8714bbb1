fn main() -> std::process::ExitCode {
    narrative_arcs::cli::main()
}
