//! Parallel enumeration and batch bound reports.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use polytc_core::bounds::{tc_bounds_with_ring, BoundOptions, TCBoundReport};
use polytc_core::genetics::{collect_codes, GeePoset, ENUMERATION_RANGE};
use polytc_core::linsys::BitVec;
use polytc_core::{build_ring, Classifier, EnumeratedCode, GeneticCode, LengthVector};
use rayon::prelude::*;

/// Same result as [`polytc_core::enumerate_genetic_codes`], with each layer's
/// realizability checks spread over threads.
pub fn enumerate_parallel(n: usize) -> Result<Vec<EnumeratedCode>> {
    let (min, max) = ENUMERATION_RANGE;
    if !(min..=max).contains(&n) {
        return Err(anyhow!("n = {n} is outside the supported range {min}..={max}"));
    }
    let poset = GeePoset::new(n);
    let root = poset.root();
    let w = poset.realize(&root).expect("<{n}> is always realizable");
    let mut found: BTreeMap<BitVec, LengthVector> = BTreeMap::new();
    let mut layer: BTreeMap<BitVec, LengthVector> = BTreeMap::from([(root, w)]);
    while !layer.is_empty() {
        let candidates: Vec<BitVec> = poset.next_layer_candidates(layer.keys()).into_iter().collect();
        found.append(&mut layer);
        layer = candidates
            .into_par_iter()
            .filter_map(|d| poset.realize(&d).map(|w| (d, w)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
    }
    collect_codes(&poset, found).map_err(|e| anyhow!("{e}"))
}

/// Reports for every code and every `k`, in input order (code-major).
pub fn bound_reports(
    codes: &[GeneticCode],
    ks: &[usize],
    classifier: &Classifier,
    opts: BoundOptions,
) -> Result<Vec<TCBoundReport>> {
    let per_code: Vec<Result<Vec<TCBoundReport>>> = codes
        .par_iter()
        .map(|code| {
            let ring = build_ring(code).map_err(|e| anyhow!("{code}: {e}"))?;
            ks.iter()
                .map(|&k| tc_bounds_with_ring(&ring, k, classifier, opts).map_err(|e| anyhow!("{code}, k = {k}: {e}")))
                .collect()
        })
        .collect();
    Ok(per_code.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}
