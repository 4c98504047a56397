pub mod asymptote;
pub mod oracle;
pub mod ricci;
pub mod verify;
pub mod wigner;
