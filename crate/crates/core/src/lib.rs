//! Cross-document claim linking for clusters of news articles.
//!
//! A cluster of articles about one story goes through four stages:
//!
//! 1. [`corpus`]: collect the articles, strip boilerplate, split sentences.
//! 2. [`claims`]: decompose each sentence into atomic claims with a few-shot
//!    prompted completion model.
//! 3. [`filter`]: prune the cross-article claim-pair space with embedding
//!    top-k similarity or stemmed lexical overlap.
//! 4. [`link`]: classify surviving pairs with an NLI model, keep the most
//!    confident entailments and contradictions, and project them back onto
//!    sentences.
//!
//! [`annotate`] turns sentence links into per-article highlights with
//! cross-source evidence, [`server`] serves them over HTTP, and [`eval`]
//! measures how well a filter separates related from unrelated pairs.
//! All models sit behind the traits in [`backends`]; the default stubs keep
//! everything deterministic and offline.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod annotate;
pub mod backends;
pub mod claims;
pub mod config;
pub mod corpus;
pub mod eval;
pub mod filter;
pub mod link;
pub mod pipeline;
pub mod server;
pub mod store;
mod util;

pub use util::now;
