pub mod compare;
pub mod eval;
pub mod simulate;
pub mod split;
pub mod wins;
