//! Library surface of the command-line tool: the JSON document model, shared
//! between the binary and its tests.

pub mod document;
