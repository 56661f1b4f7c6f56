//! Crossings as generators of arity (2;2): evaluate a braid-like word in End(Q^2) and
//! check that a positive crossing followed by a negative one cancels.

use std::collections::BTreeMap;

use wirecat::endo::{evaluate_element, identity_tensor, tensor_product, Tensor};
use wirecat::label::{l, labels, Label};
use wirecat::q;
use wirecat::wiring::Polarity;
use wirecat::wprop::{FreeElement, Signature};
use wirecat::Q;

/// A 4x4 matrix on Q^2 ⊗ Q^2 as a tensor with in-axes `x1, x2` and out-axes `y1, y2`.
fn crossing(m: [[Q; 4]; 4]) -> Tensor {
    let axes =
        vec![(Polarity::Out, l("y1")), (Polarity::Out, l("y2")), (Polarity::In, l("x1")), (Polarity::In, l("x2"))];
    Tensor::from_fn(2, axes, |i| m[2 * i[0] + i[1]][2 * i[2] + i[3]].clone()).unwrap()
}

fn main() -> Result<(), wirecat::Error> {
    let sig = Signature::new([("X+", 2, 2), ("X-", 2, 2)]);
    let s = |v: &[&str]| v.iter().map(|x| Label::new(*x).unwrap()).collect::<Vec<_>>();

    // Positive crossing on strands (a, b) -> (c, d), then a negative one (c, d) -> (e, f).
    let plus = FreeElement::generator(&sig, "X+", &labels(&["a", "b"]), &labels(&["c", "d"]))?;
    let minus = FreeElement::basis(wirecat::wprop::DecoratedGraph::corolla(sig.instance_with(
        "X-",
        s(&["p", "r"]),
        s(&["e", "f"]),
    )?));
    let both = plus.dioperadic(&l("p"), &minus, &l("c"))?;
    let word = both.contract(&l("r"), &l("d"))?;
    println!("X- ∘ X+ has boundary {:?}", word.boundary());

    // A solution of the braid relation with parameter 2, and its inverse.
    let (a, z, o) = (q(3, 2), q(0, 1), q(1, 1));
    let qq = q(2, 1);
    let r = crossing([
        [qq.clone(), z.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), o.clone(), z.clone()],
        [z.clone(), o.clone(), a.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), qq.clone()],
    ]);
    let qi = q(1, 2);
    let r_inv = crossing([
        [qi.clone(), z.clone(), z.clone(), z.clone()],
        [z.clone(), -a.clone(), o.clone(), z.clone()],
        [z.clone(), o.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), qi],
    ]);
    let bind = BTreeMap::from([("X+".to_string(), r), ("X-".to_string(), r_inv)]);
    let value = evaluate_element(&word, &bind, 2)?;

    let straight = tensor_product(&identity_tensor(&l("a"), 2), &identity_tensor(&l("b"), 2))?.relabel(
        &wirecat::label::Bijection::identity(&labels(&["a", "b"])),
        &wirecat::label::Bijection::from_pairs([("a", "e"), ("b", "f")])?,
    )?;
    println!("X- ∘ X+ evaluates to two straight strands: {}", value == straight);

    // Closing both strands of a single crossing gives a number.
    let closed = plus.contract(&l("a"), &l("c"))?.contract(&l("b"), &l("d"))?;
    let v = evaluate_element(&closed, &bind, 2)?;
    println!("closure of X+: {}", v.as_scalar().unwrap());
    Ok(())
}
