//! Keeps the README's library example compiling and passing.

use flatset::search::{search, SearchProblem};
use flatset::{analysis, constructions, ParameterSet};

#[test]
fn readme_snippet_runs() -> flatset::Result<()> {
    let golay = constructions::ternary_golay()?;
    let spec = analysis::spectrum(&golay.set)?;
    let counts: Vec<(u32, u64)> = spec.counts().iter().map(|(&s, &c)| (s, c)).collect();
    assert_eq!(counts, [(2, 55), (5, 66)]);

    let ps = ParameterSet::new(3, 1, 1, 5, 5)?;
    let out = search(&SearchProblem::new(ps)?)?;
    assert_eq!(out.witnesses.len(), 1);
    Ok(())
}
