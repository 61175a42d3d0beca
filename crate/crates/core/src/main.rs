fn main() {
    std::process::exit(dhydro::cli::main_entry());
}
