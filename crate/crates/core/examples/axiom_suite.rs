//! Run the randomized axiom suite on the free prop, on End(Q^d), and on a deliberately broken contraction.

use wirecat::endo::{BrokenEndProp, EndProp};
use wirecat::random;
use wirecat::wprop::axioms::axiom_suite;
use wirecat::wprop::FreeProp;

fn main() {
    let free = axiom_suite(&FreeProp, &random::free_sampler(), 50, 1);
    println!("free wheeled prop:\n{free}");
    for d in 1..=3 {
        let r = axiom_suite(&EndProp::new(d), &random::tensor_sampler(d), 50, 1);
        println!("End(Q^{d}): all pass = {}", r.all_pass());
    }
    let broken = axiom_suite(&BrokenEndProp { dim: 2 }, &random::tensor_sampler(2), 50, 1);
    println!("broken contraction:\n{broken}");
    let first = broken.failures().next();
    if let Some(f) = first {
        println!("first witness ({}): {}", f.axiom, f.counterexample.as_deref().unwrap_or("-"));
    }
}
