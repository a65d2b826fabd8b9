pub mod lattice;
pub mod series;
pub mod linalg;
pub mod toric;
pub mod gw;
pub mod poly;
pub mod mirror;
pub mod fibration;
pub mod verify;
pub mod props;
