//! Example programs bundled with the library, grouped by example name.

/// A bundled file: its name and contents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bundled {
    pub file: &'static str,
    pub text: &'static str,
}

macro_rules! bundled {
    ($($file:literal),* $(,)?) => {
        &[$(Bundled { file: $file, text: include_str!(concat!("../encodings/", $file)) }),*]
    };
}

pub const THREE_COL: &[Bundled] =
    bundled!["3col.lp", "3col-k3.lp", "3col-k3-isolated.lp", "3col-k4.lp"];
pub const RAMSEY: &[Bundled] = bundled!["ramsey.lp", "ramsey-n3.lp", "ramsey-n9.lp"];
pub const SUDOKU: &[Bundled] = bundled!["sudoku.lp", "sudoku-9x9.lp"];
pub const SUDOKU_TOY: &[Bundled] = bundled!["sudoku-toy.lp", "sudoku-toy-given.lp"];
pub const DLVFIT: &[Bundled] = bundled!["dlvfit-fragment.lp"];

/// Example names accepted by [`example`].
pub const NAMES: &[&str] = &["3col", "ramsey", "sudoku", "sudoku-toy", "dlvfit"];

pub fn example(name: &str) -> Option<&'static [Bundled]> {
    match name {
        "3col" => Some(THREE_COL),
        "ramsey" => Some(RAMSEY),
        "sudoku" => Some(SUDOKU),
        "sudoku-toy" => Some(SUDOKU_TOY),
        "dlvfit" => Some(DLVFIT),
        _ => None,
    }
}

/// Looks a bundled file up by its file name.
pub fn file(name: &str) -> Option<&'static str> {
    NAMES
        .iter()
        .filter_map(|n| example(n))
        .flatten()
        .find(|b| b.file == name)
        .map(|b| b.text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_file_parses() {
        for name in NAMES {
            for b in example(name).unwrap() {
                crate::syntax::parse_program(b.text).unwrap_or_else(|e| panic!("{}: {e}", b.file));
            }
        }
        assert!(example("nope").is_none());
        assert!(file("3col-k4.lp").is_some());
    }
}
