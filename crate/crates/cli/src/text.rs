//! Line-oriented text formats: datum files and state expressions.

use chiral_core::datum::{DatumError, GeneratorSpec, Parity, QuadraticDatum, RelationRow, UNIT_NAME};
use chiral_core::laurent::LaurentPoly;
use chiral_core::qls::QlsDatum;
use chiral_core::scalar::{format_scalar, parse_scalar};
use chiral_core::vertex::{Letter, ModeAlgebra, State};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(tok: &Token, message: impl Into<String>) -> Self {
        Self {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        }
    }

    fn line(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column: 1,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

/// A non-empty line with its comment stripped.
#[derive(Debug, Clone)]
pub struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    pub fn tokens(&self) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push(Token {
                        text: &self.text[s..i],
                        line: self.number,
                        column: self.text[..s].chars().count() + 1,
                    });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Section<'a> {
    pub name: String,
    pub header_line: usize,
    pub lines: Vec<Line<'a>>,
}

/// Splits `text` into `[name]` sections. Text before the first header is an
/// error.
pub fn sections(text: &str) -> Result<Vec<Section<'_>>, ParseError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ParseError::line(number, "unterminated section header"));
            };
            out.push(Section {
                name: name.trim().to_string(),
                header_line: number,
                lines: Vec::new(),
            });
            continue;
        }
        match out.last_mut() {
            Some(s) => s.lines.push(Line { number, text: body }),
            None => return Err(ParseError::line(number, "expected a section header such as [generators]")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedDatum {
    Quadratic(QuadraticDatum),
    Qls(QlsDatum),
}

impl ParsedDatum {
    pub fn datum(&self) -> &QuadraticDatum {
        match self {
            ParsedDatum::Quadratic(d) => d,
            ParsedDatum::Qls(q) => q.datum(),
        }
    }
}

fn parse_generator(line: &Line) -> Result<GeneratorSpec, ParseError> {
    let toks = line.tokens();
    if toks.len() != 4 {
        let tok = toks.get(4).unwrap_or(&toks[0]);
        return Err(ParseError::at(tok, "expected `name degree parity weight`"));
    }
    let degree: i64 = toks[1]
        .text
        .parse()
        .map_err(|_| ParseError::at(&toks[1], format!("invalid degree `{}`", toks[1].text)))?;
    let parity = match toks[2].text {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => return Err(ParseError::at(&toks[2], format!("parity must be even or odd, got `{other}`"))),
    };
    let weight = parse_scalar(toks[3].text)
        .ok_or_else(|| ParseError::at(&toks[3], format!("invalid weight `{}`", toks[3].text)))?;
    Ok(GeneratorSpec::new(toks[0].text, degree, parity, weight))
}

fn parse_exponent(tok: &Token) -> Result<i64, ParseError> {
    tok.text
        .strip_prefix("t^")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| ParseError::at(tok, format!("expected `t^k`, got `{}`", tok.text)))
}

fn parse_row(line: &Line, gens: &[GeneratorSpec]) -> Result<RelationRow, ParseError> {
    let r = gens.len();
    let index = |tok: &Token| {
        gens.iter()
            .position(|g| g.name == tok.text)
            .ok_or_else(|| ParseError::at(tok, format!("unknown generator `{}`", tok.text)))
    };
    let mut row = vec![LaurentPoly::zero(); r * r];
    let toks = line.tokens();
    for term in toks.split(|t| t.text == "+") {
        let [c, k, i, j] = term else {
            let tok = term.first().or(toks.last()).expect("line is not empty");
            return Err(ParseError::at(tok, "expected a term `coeff t^k i j`"));
        };
        let coeff = parse_scalar(c.text).ok_or_else(|| ParseError::at(c, format!("invalid coefficient `{}`", c.text)))?;
        let k = parse_exponent(k)?;
        let (i, j) = (index(i)?, index(j)?);
        row[i * r + j].add_term(k, coeff);
    }
    Ok(row)
}

/// Parses a datum file. A generator named `unit` makes it a QLS datum.
pub fn parse_datum(text: &str) -> Result<ParsedDatum, ParseError> {
    datum_from_sections(&sections(text)?)
}

/// Builds a datum from `[generators]` and `[relations]` sections; any other
/// section is an error.
pub fn datum_from_sections(secs: &[Section]) -> Result<ParsedDatum, ParseError> {
    let mut gens: Option<(usize, Vec<GeneratorSpec>, Vec<usize>)> = None;
    let mut rel_section = None;
    for s in secs {
        match s.name.as_str() {
            "generators" if gens.is_none() => {
                let mut specs = Vec::new();
                let mut lines = Vec::new();
                for l in &s.lines {
                    let g = parse_generator(l)?;
                    if specs.iter().any(|h: &GeneratorSpec| h.name == g.name) {
                        return Err(ParseError::at(&l.tokens()[0], format!("duplicate generator `{}`", g.name)));
                    }
                    specs.push(g);
                    lines.push(l.number);
                }
                gens = Some((s.header_line, specs, lines));
            }
            "relations" if rel_section.is_none() => rel_section = Some(s),
            "generators" | "relations" => {
                return Err(ParseError::line(s.header_line, format!("repeated section [{}]", s.name)))
            }
            other => return Err(ParseError::line(s.header_line, format!("unknown section [{other}]"))),
        }
    }
    let Some((gen_header, gens, gen_lines)) = gens else {
        return Err(ParseError::line(1, "missing [generators] section"));
    };
    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    if let Some(s) = rel_section {
        for l in &s.lines {
            rows.push(parse_row(l, &gens)?);
            row_lines.push(l.number);
        }
    }
    let unit_line = gens.iter().position(|g| g.name == UNIT_NAME).map(|k| gen_lines[k]);
    let datum = QuadraticDatum::new(gens, rows).map_err(|e| match e {
        DatumError::ZeroRow(k) => ParseError::line(row_lines[k], "relation row is zero"),
        other => ParseError::line(gen_header, other.to_string()),
    })?;
    if let Some(line) = unit_line {
        let q = QlsDatum::new(datum).map_err(|e| ParseError::line(line, e.to_string()))?;
        Ok(ParsedDatum::Qls(q))
    } else {
        Ok(ParsedDatum::Quadratic(datum))
    }
}

fn parity_word(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

pub fn print_row(d: &QuadraticDatum, row: &[LaurentPoly]) -> String {
    let r = d.rank();
    let names = d.generators();
    let mut terms = Vec::new();
    for (idx, p) in row.iter().enumerate() {
        for (k, c) in p.terms() {
            terms.push(format!(
                "{} t^{k} {} {}",
                format_scalar(c),
                names[idx / r].name,
                names[idx % r].name
            ));
        }
    }
    terms.join(" + ")
}

/// Prints a datum in the grammar read by [`parse_datum`].
pub fn print_datum(d: &QuadraticDatum) -> String {
    let mut out = String::from("[generators]\n");
    for g in d.generators() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            g.name,
            g.degree,
            parity_word(g.parity),
            format_scalar(&g.weight)
        ));
    }
    out.push_str("\n[relations]\n");
    for row in d.relations() {
        out.push_str(&print_row(d, row));
        out.push('\n');
    }
    out
}

/// Parses `coeff name(mode) name(mode) ... + ...` as a state of `engine`; an
/// empty word is the vacuum.
pub fn parse_state(tokens: &[Token], engine: &ModeAlgebra) -> Result<State, ParseError> {
    let mut out = State::zero();
    for term in tokens.split(|t| t.text == "+") {
        let Some((c, word)) = term.split_first() else {
            let tok = tokens.last().expect("caller passes a non-empty expression");
            return Err(ParseError::at(tok, "empty term"));
        };
        let coeff = parse_scalar(c.text).ok_or_else(|| ParseError::at(c, format!("invalid coefficient `{}`", c.text)))?;
        let mut letters: Vec<Letter> = Vec::new();
        for tok in word {
            let parsed = tok.text.strip_suffix(')').and_then(|s| s.split_once('('));
            let Some((name, mode)) = parsed else {
                return Err(ParseError::at(tok, format!("expected `name(mode)`, got `{}`", tok.text)));
            };
            let g = engine
                .generator_index(name)
                .ok_or_else(|| ParseError::at(tok, format!("unknown generator `{name}`")))?;
            let m: i64 = mode
                .parse()
                .map_err(|_| ParseError::at(tok, format!("invalid mode `{mode}`")))?;
            letters.push((g, m));
        }
        let s = engine
            .normal_order(&letters)
            .map_err(|e| ParseError::at(c, e.to_string()))?;
        out.add_scaled(&s, &coeff);
    }
    Ok(out)
}
