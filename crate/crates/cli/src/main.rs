fn main() {
    println!("leafvib");
}
