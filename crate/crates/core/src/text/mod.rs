//! Raw advertisement text to [`TokenizedDocument`].
//!
//! Offsets in [`Token`] and sentence ranges are byte offsets into the
//! extracted text, so `&text[start..end]` is always the token surface.

mod html;
mod tokenizer;

pub use html::{decode_entities, extract_access_text, looks_like_html};
pub use tokenizer::{Token, TokenizedDocument, Tokenizer};
