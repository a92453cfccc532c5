fn main() { println!("latcomb cli placeholder"); }
