//! Build graphs flag by flag, substitute one into a vertex of another, and compare them up to isomorphism.

use wirecat::graphs::{corolla, is_isomorphic_loose, is_isomorphic_strict, substitute, GraphBuilder, Sign};
use wirecat::label::l;

fn main() -> Result<(), wirecat::Error> {
    // Two vertices in a row: boundary input `a` -> v0 -> v1 -> boundary output `b`.
    let mut b = GraphBuilder::new();
    let v0 = b.add_vertex();
    let v1 = b.add_vertex();
    let i0 = b.add_flag(v0, Sign::Pos, l("p"));
    let o0 = b.add_flag(v0, Sign::Neg, l("q"));
    let i1 = b.add_flag(v1, Sign::Pos, l("p"));
    let o1 = b.add_flag(v1, Sign::Neg, l("q"));
    b.set_boundary(i0, l("a"));
    b.join(o0, i1);
    b.set_boundary(o1, l("b"));
    let chain = b.build()?;
    println!("chain boundary {:?}, vertex 0 neighbourhood {:?}", chain.boundary(), chain.neighbourhood(0));

    // Substituting the chain into the middle of itself gives a chain of three.
    let three = substitute(&chain, 0, &{
        let mut b = GraphBuilder::new();
        let v = b.add_vertex();
        let w = b.add_vertex();
        let x = b.add_flag(v, Sign::Pos, l("s"));
        let y = b.add_flag(v, Sign::Neg, l("t"));
        let z = b.add_flag(w, Sign::Pos, l("s"));
        let u = b.add_flag(w, Sign::Neg, l("t"));
        b.set_boundary(x, l("p"));
        b.join(y, z);
        b.set_boundary(u, l("q"));
        b.build()?
    })?;
    println!("after substitution: {} vertices, {} edges", three.vertex_count(), three.edges().len());

    // A corolla of the right neighbourhood is a unit for substitution.
    let nbh = chain.neighbourhood(1);
    let same = substitute(&chain, 1, &corolla(&nbh.inputs, &nbh.outputs))?;
    println!("corolla substitution is strictly isomorphic: {}", is_isomorphic_strict(&same, &chain));

    // Swapping vertex order breaks strict isomorphism but not loose isomorphism.
    let swapped = chain.reorder_vertices(&[1, 0])?;
    println!("swapped, strict: {}", is_isomorphic_strict(&swapped, &chain));
    println!("swapped, loose: {:?}", is_isomorphic_loose(&swapped, &chain)?);

    // Gluing the boundary back on itself closes a loop through both vertices.
    let ring = wirecat::graphs::contract_boundary(&chain, &l("a"), &l("b"))?;
    assert!(ring.boundary().all_labels().is_empty());
    println!("ring: {} edges, {} free loops", ring.edges().len(), ring.loop_count());
    println!("{}", ring.to_dot());
    Ok(())
}
