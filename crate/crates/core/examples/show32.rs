use muway_core::trades::gear_trade;
use muway_core::mwls::render_trade;

fn main() {
    let t = gear_trade(4, 4, 3, 1, 4).unwrap();
    println!("{}", render_trade(&t));
}
