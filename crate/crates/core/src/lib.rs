//! Approximate minimum vertex cover by reductions driven by the odd-cycle
//! strengthened LP relaxation, with exact rational arithmetic throughout.
//!
//! ```
//! use elp_vc::cover::{backtrack, certify};
//! use elp_vc::graph::GeneratorKind;
//! use elp_vc::reduce::{run_pipeline, PipelineConfig};
//!
//! let g = GeneratorKind::Cycle(7).generate().unwrap();
//! let run = run_pipeline(&g, &PipelineConfig::default()).unwrap();
//! let cover = backtrack(&run.trace).unwrap();
//! assert_eq!(cover.len(), 4);
//! assert!(certify(&run.trace, &cover).xi == elp_vc::rational::Rat::integer(0));
//! ```

pub mod bench;
pub mod cover;
pub mod elp;
pub mod graph;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod reduce;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/exact-lp.md")]
    mod exact_lp {}
    #[doc = include_str!("../../../book/src/relaxation.md")]
    mod relaxation {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/backtracking.md")]
    mod backtracking {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
