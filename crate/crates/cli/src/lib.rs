//! Spec-file front end and command implementations for the `lta` tool.

pub mod commands;
pub mod syntax;
