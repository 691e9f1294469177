//! Scenario files, expression parsing and reports for the semistar workbench.

pub mod expr;
pub mod report;
pub mod run;
pub mod scenario;
