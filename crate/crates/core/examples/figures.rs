//! Lattice point pictures of semigroups, holes and roots.

use toric_roots::cli::figure::{render, FigureSpec, Format};
use toric_roots::cli::fixtures;
use toric_roots::cone::IntBox;

fn main() {
    let bx = IntBox::from_bounds(&[(-1, 9), (-2, 9)]).unwrap();
    for name in ["s1prime", "fig4"] {
        println!("{name}:");
        print!("{}", render(&fixtures::load(name), &FigureSpec { bx: bx.clone(), format: Format::Ascii }).unwrap());
    }
    let svg = render(&fixtures::load("fig4"), &FigureSpec { bx, format: Format::Svg }).unwrap();
    println!("svg output: {} bytes, {} holes", svg.len(), svg.matches("class=\"hole\"").count());
    let big = IntBox::cube(2, 60);
    println!("{:?}", render(&fixtures::load("fig4"), &FigureSpec { bx: big, format: Format::Ascii }).err().map(|e| e.to_string()));
}
