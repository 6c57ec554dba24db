pub mod analytic;
pub mod cli;
pub mod forms;
pub mod genus;
pub mod group;
pub mod mock;
pub mod num;
pub mod series;
pub mod siegel;
pub mod tables;
pub mod verify;
