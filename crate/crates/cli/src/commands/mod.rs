pub mod capacity;
pub mod entanglement;
pub mod simulate;
pub mod verify;
