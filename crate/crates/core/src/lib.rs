pub mod embed;
pub mod forms;
pub mod oracle;
pub mod padic;
pub mod symbols;
