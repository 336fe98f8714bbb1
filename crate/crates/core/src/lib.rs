pub mod arcs;
pub mod characters;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod evalkit;
pub mod events;
pub mod participants;
pub mod pipeline;
pub mod render;
pub mod scoring;
