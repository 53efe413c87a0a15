//! Inputs shared by the benchmarks.

use chorec_core::gen::{gen_corpus, CorpusItem, CorpusKind};
use chorec_core::{Choreography, ProcName, ProcState};

pub fn projectable_corpus(seed: u64, count: usize) -> Vec<Choreography> {
    gen_corpus(seed, count, CorpusKind::Projectable)
        .into_iter()
        .filter_map(|item| match item {
            CorpusItem::Choreography(c) => Some(c),
            CorpusItem::RecFun(_) => None,
        })
        .collect()
}

pub fn inputs(values: &[u64]) -> ProcState {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| (ProcName::new(&format!("p{}", i + 1)).unwrap(), v.into()))
        .collect()
}
