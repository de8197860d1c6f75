//! Experiment harness behind the `zolo` binary: named ensembles, the
//! verification suite and the figure data series.

pub mod ensemble;
pub mod figures;
pub mod suite;
