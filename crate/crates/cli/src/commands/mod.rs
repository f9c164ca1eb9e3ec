pub mod export;
pub mod params;
pub mod qc;
pub mod sweep;
pub mod verify;
