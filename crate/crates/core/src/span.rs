use std::fmt;
use std::sync::Arc;

/// A region of source text. Lines and columns are 1-based; the end position
/// is inclusive of the last character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, line_start: u32, col_start: u32, line_end: u32, col_end: u32) -> Self {
        debug_assert!(line_start >= 1 && col_start >= 1);
        debug_assert!((line_start, col_start) <= (line_end, col_end));
        SourceSpan {
            file,
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Span used for nodes built programmatically rather than parsed.
    pub fn synthetic() -> Self {
        SourceSpan::new(Arc::from("<builtin>"), 1, 1, 1, 1)
    }

    /// The smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        let (ls, cs) = (self.line_start, self.col_start).min((other.line_start, other.col_start));
        let (le, ce) = (self.line_end, self.col_end).max((other.line_end, other.col_end));
        SourceSpan::new(self.file.clone(), ls, cs, le, ce)
    }

    pub fn contains(&self, inner: &SourceSpan) -> bool {
        (self.line_start, self.col_start) <= (inner.line_start, inner.col_start)
            && (inner.line_end, inner.col_end) <= (self.line_end, self.col_end)
    }

    pub fn start(&self) -> (u32, u32) {
        (self.line_start, self.col_start)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line_start, self.col_start)
    }
}
