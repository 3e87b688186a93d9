pub mod cli;
pub mod degeneration;
pub mod fan;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod roots;
pub mod report;
pub mod restriction;
pub mod spherical;
pub mod tits;
pub mod validation;
