//! Glue wiring diagrams into each other and check the operad laws on an example.

use wirecat::label::labels;
use wirecat::wiring::{compose, identity_diagram, Interface, WiringDiagram};

fn main() -> Result<(), wirecat::Error> {
    // One box with out {x} and in {y}. Matchings run from Out to In endpoints:
    // the outer Out `a` feeds the box's In `y`, and the box's Out `x` feeds the outer In `b`.
    let outer = WiringDiagram::from_json(
        r#"{"output":{"out":["a"],"in":["b"]},"inputs":[{"out":["x"],"in":["y"]}],
            "matching":[[[0,"out","a"],[1,"in","y"]],[[1,"out","x"],[0,"in","b"]]],"circles":0}"#,
    )?;
    println!("outer: {}", outer.to_json());

    // Something to put in box 1: its output must be the flipped hole.
    let hole = outer.inputs()[0].flipped();
    assert_eq!(hole, Interface::of(&["y"], &["x"]));
    let inner = WiringDiagram::from_json(
        r#"{"output":{"out":["y"],"in":["x"]},"inputs":[{"out":["u"],"in":["v"]},{"out":["w"],"in":["z"]}],
            "matching":[[[0,"out","y"],[1,"in","v"]],[[1,"out","u"],[2,"in","z"]],[[2,"out","w"],[0,"in","x"]]],
            "circles":0}"#,
    )?;
    let glued = compose(&outer, 1, &inner)?;
    println!("outer ∘_1 inner has {} boxes: {}", glued.input_count(), glued.to_json());

    // Units on both sides.
    let left = identity_diagram(&labels(&["a"]), &labels(&["b"]));
    assert_eq!(compose(&left, 1, &glued)?, glued);
    let right = identity_diagram(&labels(&["v"]), &labels(&["u"]));
    assert_eq!(compose(&glued, 1, &right)?, glued);

    // Feeding a box its own output and filling it with a wire leaves a circle.
    let feedback = WiringDiagram::from_json(
        r#"{"output":{"out":[],"in":[]},"inputs":[{"out":["s"],"in":["s"]}],
            "matching":[[[1,"out","s"],[1,"in","s"]]],"circles":0}"#,
    )?;
    let wire = WiringDiagram::from_json(
        r#"{"output":{"out":["s"],"in":["s"]},"inputs":[],"matching":[[[0,"out","s"],[0,"in","s"]]],"circles":0}"#,
    )?;
    let closed = compose(&feedback, 1, &wire)?;
    println!("closing the feedback loop around one box: {} boxes, {} circles", closed.input_count(), closed.circles());
    Ok(())
}
