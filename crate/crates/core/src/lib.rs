pub mod axioms;
pub mod finder;
pub mod logic;
pub mod machine;
pub mod structures;
pub mod tm;
