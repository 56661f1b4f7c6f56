//! Tensors over Q^d as a wheeled prop: matrix products, traces and the action of a diagram.

use wirecat::endo::{trace_contract, EndProp, Tensor};
use wirecat::label::l;
use wirecat::q;
use wirecat::translate::wd_to_graph;
use wirecat::wiring::WiringDiagram;
use wirecat::wprop::{wd_action, WheeledProp};

fn main() -> Result<(), wirecat::Error> {
    let w = EndProp::new(2);
    let a = Tensor::from_matrix(&l("i"), &l("j"), &[vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 2)]])?;
    let b = Tensor::from_matrix(&l("k"), &l("m"), &[vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(3, 1)]])?;

    // Composition along i = m is the matrix product AB.
    let ab = w.dioperadic(&a, &l("i"), &b, &l("m"))?;
    for row in ab.to_matrix().unwrap() {
        println!("AB row: {}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("  "));
    }
    let ba = w.dioperadic(&b, &l("k"), &a, &l("j"))?;

    let t_ab = trace_contract(&ab, &l("k"), &l("j"))?;
    let t_ba = trace_contract(&ba, &l("i"), &l("m"))?;
    println!("tr(AB) = {}, tr(BA) = {}", t_ab.as_scalar().unwrap(), t_ba.as_scalar().unwrap());

    // A closed wire is worth d.
    let circle = w.contract(&w.unit(&l("u")), &l("u"), &l("u"))?;
    println!("value of a circle: {}", circle.as_scalar().unwrap());

    // A diagram with two boxes in a cycle computes tr(XY).
    let d = WiringDiagram::from_json(
        r#"{"output":{"out":[],"in":[]},"inputs":[{"out":["o"],"in":["i"]},{"out":["o"],"in":["i"]}],
            "matching":[[[1,"out","o"],[2,"in","i"]],[[2,"out","o"],[1,"in","i"]]],"circles":1}"#,
    )?;
    let x = Tensor::from_matrix(&l("i"), &l("o"), &a.to_matrix().unwrap())?;
    let y = Tensor::from_matrix(&l("i"), &l("o"), &b.to_matrix().unwrap())?;
    let v = wd_action(&w, &d, &[x, y])?;
    println!("d · tr(AB) via the diagram: {}", v.as_scalar().unwrap());
    println!("{}", wd_to_graph(&d).to_dot());
    Ok(())
}
