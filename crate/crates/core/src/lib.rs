pub mod algebra;
pub mod auxiliary;
pub mod efunction;
pub mod evalcert;
pub mod forms;
pub mod logmeasure;
pub mod zeroestimate;
