fn main() {
    std::process::exit(regdyn_core::cli_main());
}
