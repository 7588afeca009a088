pub mod dynatomic;
pub mod error;
pub mod family;
pub mod lattes;
pub mod measures;
pub mod monomial;
pub mod numeric;
pub mod preperiodic;
pub mod projective;
pub mod transversality;
