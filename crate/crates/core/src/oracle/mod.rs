//! Unweighted descendants: Witten–Kontsevich numbers for the point target and
//! table-backed formal targets.

mod target;
mod wk;

pub use target::{load_target, ClassComb, ClassId, ClassInfo, DescendantKey, TargetKind, TargetModel, UNIT};
pub use wk::{genus0_point, wk_point, Scheme, WittenKontsevich};
