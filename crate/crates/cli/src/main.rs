fn main() {
    std::process::exit(pcc::run(std::env::args_os()));
}
