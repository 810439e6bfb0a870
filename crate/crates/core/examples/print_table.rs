fn main() {
    let n: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    print!("{}", anticont::build_table(n).unwrap().to_text());
}
