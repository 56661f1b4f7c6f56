//! Generalised Killing forms of sl2 by graph evaluation, and a semisimplicity check.

use wirecat::lie::{killing_eval, killing_oracle, semisimple_witness, sl2_bracket, solvable_bracket};

fn main() -> Result<(), wirecat::Error> {
    let br = sl2_bracket();
    let names = ["e", "f", "h"];
    let k2 = killing_eval(&br, 2)?;
    for (a, x) in names.iter().enumerate() {
        let row: Vec<String> = (0..3).map(|b| k2.get(&[a, b]).to_string()).collect();
        println!("κ2({x}, -) = [{}]", row.join(", "));
    }
    for n in 1..=4 {
        let same = killing_eval(&br, n)? == killing_oracle(&br, n)?;
        println!("κ{n}: graph evaluation matches adjoint traces: {same}");
    }
    let k3 = killing_eval(&br, 3)?;
    println!("κ3(e, f, h) = {}, κ3(f, e, h) = {}", k3.get(&[0, 1, 2]), k3.get(&[1, 0, 2]));

    println!("sl2: {:?}", semisimple_witness(&br)?);
    println!("[e,f] = e: {:?}", semisimple_witness(&solvable_bracket())?);
    println!("{}", wirecat::lie::killing_graph(3).graph().to_dot());
    Ok(())
}
