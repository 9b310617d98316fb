fn main() {
    std::process::exit(biaswalk::run(std::env::args_os()));
}
