//! Fixtures shared by the criterion benches.

use exoflop::cohomology::ConifoldData;
use exoflop::{parse_polynomial, ParseContext, Polynomial};

pub const FERMAT: &str = "s0^5+s1^5+s2^5+s3^5+s4^5";
pub const DWORK: &str = "s0^5+s1^5+s2^5+s3^5+s4^5-5*s0*s1*s2*s3*s4";

pub fn quintic(text: &str) -> Polynomial {
    parse_polynomial(text, &ParseContext::quintic(5).unwrap()).unwrap()
}

/// `n` nodes split round-robin into `classes` homology classes over a quintic base.
pub fn conifold(n: usize, classes: usize) -> ConifoldData {
    let mut split = vec![Vec::new(); classes];
    for j in 1..=n {
        split[(j - 1) % classes].push(j);
    }
    ConifoldData::new([1, 0, 1 + classes, 204, 1 + classes, 0, 1], n, split)
}
