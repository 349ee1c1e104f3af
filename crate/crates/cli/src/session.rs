//! Session files: `[field]`, `[defs]` and `[run]` sections.

use crate::CliError;

/// A source line with its 1-based line number in the session file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Session {
    /// Field declaration with every non-field line blanked, so that line
    /// numbers in field errors match the session file.
    pub field_text: String,
    pub order: Option<String>,
    pub defs: Vec<Line>,
    pub run: Vec<Line>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Defs,
    Run,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

impl Session {
    pub fn parse(text: &str) -> Result<Session, CliError> {
        let mut s = Session::default();
        let mut section = Section::None;
        let mut seen = Vec::new();
        let mut field_lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let number = k + 1;
            let line = strip_comment(raw);
            let mut field_line = String::new();
            if line.starts_with('[') {
                section = match line {
                    "[field]" => Section::Field,
                    "[defs]" => Section::Defs,
                    "[run]" => Section::Run,
                    _ => {
                        return Err(CliError::Syntax {
                            line: number,
                            message: format!("unknown section {line}"),
                        })
                    }
                };
                if seen.contains(&line) {
                    return Err(CliError::Syntax {
                        line: number,
                        message: format!("section {line} appears twice"),
                    });
                }
                seen.push(line);
            } else if !line.is_empty() {
                match section {
                    Section::None => {
                        return Err(CliError::Syntax {
                            line: number,
                            message: "content before the first section".into(),
                        })
                    }
                    Section::Field => match line.strip_prefix("order:") {
                        Some(o) => s.order = Some(o.trim().to_string()),
                        None => field_line = raw.to_string(),
                    },
                    Section::Defs => s.defs.push(Line {
                        number,
                        text: line.to_string(),
                    }),
                    Section::Run => s.run.push(Line {
                        number,
                        text: line.to_string(),
                    }),
                }
            }
            field_lines.push(field_line);
        }
        if !seen.contains(&"[field]") {
            return Err(CliError::Syntax {
                line: 1,
                message: "missing [field] section".into(),
            });
        }
        s.field_text = field_lines.join("\n");
        Ok(s)
    }
}
