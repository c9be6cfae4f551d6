pub mod constraints;
pub mod decompose;
pub mod refute;
pub mod simulate;
pub mod verify;
