//! Elements of the free wheeled prop on two generators: biased operations, flattening and the monad laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wirecat::graphs::{corolla, tadpole};
use wirecat::label::{l, labels, Boundary};
use wirecat::random;
use wirecat::wprop::{structure_map, Free, FreeElement, FreeProp};

fn main() -> Result<(), wirecat::Error> {
    let sig = random::two_generator_signature();
    // g: two inputs, one output; h: one input, two outputs.
    let g = FreeElement::generator(&sig, "g", &labels(&["a", "b"]), &labels(&["c"]))?;
    let h = FreeElement::generator(&sig, "h", &labels(&["x"]), &labels(&["y", "z"]))?;

    // Feed h's output y into g's input a.
    let gh = g.dioperadic(&l("a"), &h, &l("y"))?;
    println!("g ∘ h has boundary {:?} and {} term(s)", gh.boundary(), gh.terms().len());

    // Trace one of g's inputs against its output: a single wheel.
    let wheel = g.contract(&l("b"), &l("c"))?;
    println!("wheel boundary: {:?}", wheel.boundary());

    // Linear combinations are plain sums.
    let sum = gh.add(&gh.scale(&wirecat::q(-1, 2)))?;
    println!("gh - gh/2 has coefficient {}", sum.terms().values().next().unwrap());

    // The biased operations agree with one-shot flattening of the tadpole.
    let t = tadpole(&Boundary::of(&["a", "b"], &["c"]), &l("b"), &l("c"))?;
    let flat = Free::flatten_over(&t, std::slice::from_ref(&g))?;
    assert_eq!(flat, wheel);
    assert_eq!(structure_map(&FreeProp, &t, std::slice::from_ref(&g))?, wheel);
    println!("tadpole flattening equals contraction");

    // F(F(E)) -> F(E): a corolla decorated by an element flattens to that element.
    let outer = corolla(&labels(&["b", "x"]), &labels(&["c", "z"]));
    assert_eq!(Free::flatten_over(&outer, std::slice::from_ref(&gh))?, gh);

    // The same check on random nested elements.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shape = random::GraphShape { max_vertices: 2, max_edges: 2, max_free_edges: 1, max_loops: 1, max_arity: 2 };
    let mut leaf = |rng: &mut ChaCha8Rng, b: &Boundary| random::loose_instance(rng, b);
    let mut mid = |rng: &mut ChaCha8Rng, b: &Boundary| random::decorated(rng, b, shape, &mut leaf);
    let mut ok = 0;
    for _ in 0..20 {
        let bd = random::boundary(&mut rng, 2);
        let x = {
            let mut top = |rng: &mut ChaCha8Rng, b: &Boundary| random::decorated(rng, b, shape, &mut mid);
            random::element_of(&mut rng, &bd, shape, &mut top)
        };
        let lhs = x.flatten().flatten();
        let rhs = x.map_basis(|k| Ok(Free::basis(k.flatten())))?;
        ok += (lhs == rhs) as usize;
    }
    println!("monad associativity held on {ok}/20 random triple nestings");
    println!("{}", serde_json::to_string_pretty(&wheel)?);
    Ok(())
}
