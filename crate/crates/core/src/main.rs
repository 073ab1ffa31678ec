fn main() {
    denotational_contracts::cli::main()
}
