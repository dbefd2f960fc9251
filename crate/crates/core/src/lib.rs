//! Construction, exhaustive search, validation and spectrum bookkeeping for
//! mu-way latin squares and trades, organized around intersection sizes.

pub mod compact;
pub mod complete;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod intset;
pub mod mwls;
pub mod search;
pub mod spectrum;
pub mod square;
pub mod trades;
pub mod trade;

pub use error::{Error, Result};
pub use grid::{validate_partial_latin, Grid, Symbol};
pub use square::{assemble_mu_way, MuWaySquare, Skeleton};
pub use trade::{Line, MuWayTrade};
