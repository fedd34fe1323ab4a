use exoflop::singular::{verify_transversal, AnalysisOptions, CandidateSource, SingularityClass};
use exoflop::{parse_polynomial, ParseContext};
use num::BigInt;

#[test]
fn dwork_at_psi_one_has_125_certified_nodes() {
    let ctx = ParseContext::quintic(5).unwrap();
    let g = parse_polynomial("s0^5+s1^5+s2^5+s3^5+s4^5-5*s0*s1*s2*s3*s4", &ctx).unwrap();
    let opts = AnalysisOptions { jobs: 4, ..AnalysisOptions::default() };
    let r = verify_transversal(&g, &CandidateSource::AnsatzRoots, opts).unwrap();
    assert_eq!(r.rays.len(), 125);
    assert!(r.rays.iter().all(|x| x.class() == SingularityClass::Node));
    assert_eq!(r.certificate.as_ref().unwrap().krull_dimension, 1);
    assert_eq!(r.certificate.as_ref().unwrap().length, BigInt::from(125));
    assert!(r.complete && r.isolated && !r.transversal);
}
