use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// 0-based character offset into the source.
    pub position: usize,
}

impl Token {
    /// Numeric value of a number token.
    pub(crate) fn number(&self) -> Option<f64> {
        match self.kind {
            TokenKind::Number => self.lexeme.parse().ok(),
            _ => None,
        }
    }

    pub(crate) fn is_op(&self, op: char) -> bool {
        self.kind == TokenKind::Operator && self.lexeme.starts_with(op)
    }

    pub(crate) fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.lexeme == text
    }
}

/// Split an expression into tokens.
///
/// Numbers accept `12`, `1.5`, `.5`, `2.` and exponent forms such as
/// `1e-3` or `2.5E+4`. A number immediately followed by another `.` is
/// rejected, which catches typos like `3..5`.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            i = scan_number(&chars, i)?;
            TokenKind::Number
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            TokenKind::Identifier
        } else {
            i += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => TokenKind::Operator,
                '(' | ')' => TokenKind::Paren,
                ',' => TokenKind::Comma,
                _ => {
                    return Err(ExprError::Lexical {
                        position: start,
                        message: format!("unrecognized character `{c}`"),
                    })
                }
            }
        };
        tokens.push(Token {
            kind,
            lexeme: chars[start..i].iter().collect(),
            position: start,
        });
    }
    Ok(tokens)
}

fn scan_number(chars: &[char], mut i: usize) -> Result<usize, ExprError> {
    let digits = |chars: &[char], mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(chars, i);
    if chars.get(i) == Some(&'.') {
        i = digits(chars, i + 1);
    }
    if matches!(chars.get(i), Some('e' | 'E')) {
        let mut j = i + 1;
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        if !chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
            return Err(ExprError::Lexical {
                position: j,
                message: "malformed exponent in number".into(),
            });
        }
        i = digits(chars, j);
    }
    if chars.get(i) == Some(&'.') {
        return Err(ExprError::Lexical {
            position: i,
            message: "malformed number".into(),
        });
    }
    Ok(i)
}
