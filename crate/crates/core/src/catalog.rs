//! Built-in presentation graphs.
//!
//! gamma1 and gamma2 are transcribed by hand from the published drawings of
//! the two defining graphs. If a transcription error turns up, this is the
//! only file to touch.
//!
//! gamma1: hexagon c1-c2-c3-c6-c5-c4-c1 glued to K(3,3) on {c4,c6,d2} x {c5,d1,d3}
//! along the path c4-c5-c6. The group splits as W(c1..c6) *_C W(c4,c5,c6,d1,d2,d3)
//! with C = <c4,c5,c6>.
//!
//! gamma2: hexagon a1-a2-a3-a6-a5-a4-a1, a second hexagon a4-a5-a6-b3-b2-b1-a4
//! sharing the path a4-a5-a6, and K(3,3) on {b1,b3,b5} x {b2,b4,b6} sharing
//! the path b1-b2-b3.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::presentation::{parse_presentation, PresentationGraph};

pub const BUILTIN_NAMES: [&str; 6] = ["hexagon", "k33", "gamma1", "gamma2", "croke-kleiner", "tree3"];

const HEXAGON: &str = "\
gen h1 2
gen h2 2
gen h3 2
gen h4 2
gen h5 2
gen h6 2
rel h1 h2
rel h2 h3
rel h3 h4
rel h4 h5
rel h5 h6
rel h6 h1
";

const K33: &str = "\
gen x1 2
gen x2 2
gen x3 2
gen y1 2
gen y2 2
gen y3 2
rel x1 y1
rel x1 y2
rel x1 y3
rel x2 y1
rel x2 y2
rel x2 y3
rel x3 y1
rel x3 y2
rel x3 y3
";

const GAMMA1: &str = "\
gen c1 2
gen c2 2
gen c3 2
gen c4 2
gen c5 2
gen c6 2
gen d1 2
gen d2 2
gen d3 2
# hexagon
rel c1 c2
rel c2 c3
rel c3 c6
rel c6 c5
rel c5 c4
rel c4 c1
# K(3,3), c4-c5 and c6-c5 already present
rel c4 d1
rel c4 d3
rel c6 d1
rel c6 d3
rel d2 c5
rel d2 d1
rel d2 d3
";

const GAMMA2: &str = "\
gen a1 2
gen a2 2
gen a3 2
gen a4 2
gen a5 2
gen a6 2
gen b1 2
gen b2 2
gen b3 2
gen b4 2
gen b5 2
gen b6 2
# first hexagon
rel a1 a2
rel a2 a3
rel a3 a6
rel a6 a5
rel a5 a4
rel a4 a1
# second hexagon, shares a4-a5-a6
rel a6 b3
rel b3 b2
rel b2 b1
rel b1 a4
# K(3,3), shares b1-b2-b3
rel b1 b4
rel b1 b6
rel b3 b4
rel b3 b6
rel b5 b2
rel b5 b4
rel b5 b6
";

const CROKE_KLEINER: &str = "\
gen a inf
gen b inf
gen c inf
gen d inf
rel a b
rel b c
rel c d
";

const TREE3: &str = "\
gen t1 2
gen t2 2
gen t3 2
";

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "hexagon" => HEXAGON,
        "k33" => K33,
        "gamma1" => GAMMA1,
        "gamma2" => GAMMA2,
        "croke-kleiner" => CROKE_KLEINER,
        "tree3" => TREE3,
        _ => return None,
    })
}

pub fn presentation(name: &str) -> Result<PresentationGraph> {
    let text = source(name)
        .ok_or_else(|| Error::Precondition(format!("unknown builtin `{name}`")))?;
    parse_presentation(text)
}

pub fn group(name: &str) -> Result<Group> {
    presentation(name).map(Group::new)
}
