pub mod beta;
pub mod spectrum;
pub mod verdict;
pub mod verify;
