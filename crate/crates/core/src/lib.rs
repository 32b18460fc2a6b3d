//! Verb-negation probing for extractive question answering.
pub mod analysis;
pub mod corpus;
pub mod lexicon;
pub mod perturb;
pub mod qamodel;
pub mod report;
pub mod seeding;
pub mod textproc;
