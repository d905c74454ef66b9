//! Forgiving HTML scanner that pulls the text of `<p>` elements.

use alloc::string::String;
use alloc::vec::Vec;

use crate::fold::normalize_ws;

/// True if the input contains anything that looks like a tag.
pub fn looks_like_html(input: &str) -> bool {
    let bytes = input.as_bytes();
    bytes.windows(2).any(|w| w[0] == b'<' && (w[1].is_ascii_alphabetic() || w[1] == b'/' || w[1] == b'!'))
}

/// Returns the text of all `<p>` elements in document order, one paragraph
/// per line, with tags stripped, entities decoded and `<br>` turned into a
/// space. Without any `<p>` the whole input is tag-stripped instead (block
/// elements become line breaks). Input without tags is returned unchanged.
pub fn extract_access_text(input: &str) -> String {
    if !looks_like_html(input) {
        return String::from(input);
    }
    let events = scan(input);
    if events.iter().any(|e| matches!(e, Event::Open(name) if name == "p")) {
        paragraphs(&events)
    } else {
        fallback(&events)
    }
}

#[derive(Debug, PartialEq)]
enum Event<'a> {
    Text(&'a str),
    Open(String),
    Close(String),
}

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "dd", "div", "dl", "dt", "footer", "form", "h1", "h2",
    "h3", "h4", "h5", "h6", "header", "hr", "html", "li", "main", "nav", "ol", "p", "section", "table", "td", "th",
    "tr", "ul",
];

fn is_block(name: &str) -> bool {
    BLOCK_TAGS.contains(&name)
}

fn scan(input: &str) -> Vec<Event<'_>> {
    let mut events = Vec::new();
    let mut rest = input;
    let mut skip_until: Option<&'static str> = None;
    while !rest.is_empty() {
        let Some(lt) = rest.find('<') else {
            if skip_until.is_none() {
                events.push(Event::Text(rest));
            }
            break;
        };
        if lt > 0 && skip_until.is_none() {
            events.push(Event::Text(&rest[..lt]));
        }
        let tag_src = &rest[lt..];
        if let Some(body) = tag_src.strip_prefix("<!--") {
            rest = body.find("-->").map_or("", |end| &body[end + 3..]);
            continue;
        }
        let next = tag_src.as_bytes().get(1).copied().unwrap_or(b' ');
        if !(next.is_ascii_alphabetic() || next == b'/' || next == b'!' || next == b'?') {
            // a bare '<' in text
            if skip_until.is_none() {
                events.push(Event::Text(&tag_src[..1]));
            }
            rest = &tag_src[1..];
            continue;
        }
        let Some(gt) = tag_src.find('>') else {
            // unterminated tag: drop it
            break;
        };
        let inner = &tag_src[1..gt];
        rest = &tag_src[gt + 1..];
        let closing = inner.starts_with('/');
        let name: String = inner
            .trim_start_matches('/')
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        if name.is_empty() {
            continue;
        }
        if let Some(until) = skip_until {
            if closing && name == until {
                skip_until = None;
            }
            continue;
        }
        if !closing && (name == "script" || name == "style") {
            skip_until = Some(if name == "script" { "script" } else { "style" });
            continue;
        }
        let self_closing = inner.ends_with('/');
        if closing {
            events.push(Event::Close(name));
        } else {
            events.push(Event::Open(name.clone()));
            if self_closing && name != "br" {
                events.push(Event::Close(name));
            }
        }
    }
    events
}

fn paragraphs(events: &[Event<'_>]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut current: Option<String> = None;
    let finish = |current: &mut Option<String>, out: &mut Vec<String>| {
        if let Some(buf) = current.take() {
            let text = normalize_ws(&buf);
            if !text.is_empty() {
                out.push(text);
            }
        }
    };
    for event in events {
        match event {
            Event::Open(name) if name == "p" => {
                finish(&mut current, &mut out);
                current = Some(String::new());
            }
            Event::Close(name) if name == "p" || is_block(name) => finish(&mut current, &mut out),
            Event::Open(name) if is_block(name) => finish(&mut current, &mut out),
            Event::Open(name) if name == "br" => {
                if let Some(buf) = current.as_mut() {
                    buf.push(' ');
                }
            }
            Event::Text(t) => {
                if let Some(buf) = current.as_mut() {
                    decode_entities_into(t, buf);
                }
            }
            _ => {}
        }
    }
    finish(&mut current, &mut out);
    out.join("\n")
}

fn fallback(events: &[Event<'_>]) -> String {
    let mut buf = String::new();
    for event in events {
        match event {
            Event::Text(t) => decode_entities_into(t, &mut buf),
            Event::Open(name) | Event::Close(name) if name == "br" || is_block(name) => buf.push('\n'),
            _ => {}
        }
    }
    let lines: Vec<String> = buf.lines().map(normalize_ws).filter(|l| !l.is_empty()).collect();
    lines.join("\n")
}

const NAMED_ENTITIES: &[(&str, char)] = &[
    ("amp", '&'),
    ("lt", '<'),
    ("gt", '>'),
    ("quot", '"'),
    ("apos", '\''),
    ("nbsp", ' '),
    ("auml", 'ä'),
    ("ouml", 'ö'),
    ("uuml", 'ü'),
    ("Auml", 'Ä'),
    ("Ouml", 'Ö'),
    ("Uuml", 'Ü'),
    ("szlig", 'ß'),
    ("sect", '§'),
    ("ndash", '–'),
    ("mdash", '—'),
    ("bdquo", '„'),
    ("ldquo", '“'),
    ("rdquo", '”'),
    ("sbquo", '‚'),
    ("lsquo", '‘'),
    ("rsquo", '’'),
    ("laquo", '«'),
    ("raquo", '»'),
    ("euro", '€'),
    ("hellip", '…'),
    ("bull", '•'),
    ("middot", '·'),
    ("shy", '\u{ad}'),
];

/// Decodes named and numeric character references. Unknown references are
/// copied through.
pub fn decode_entities(input: &str) -> String {
    let mut out = String::with_capacity(input.len());
    decode_entities_into(input, &mut out);
    out
}

fn decode_entities_into(input: &str, out: &mut String) {
    let mut rest = input;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let after = &rest[amp + 1..];
        let decoded = after.find(';').filter(|&semi| semi <= 10).and_then(|semi| {
            let name = &after[..semi];
            let ch = if let Some(num) = name.strip_prefix('#') {
                let code = match num.strip_prefix(['x', 'X']) {
                    Some(hex) => u32::from_str_radix(hex, 16).ok(),
                    None => num.parse::<u32>().ok(),
                };
                code.and_then(char::from_u32)
            } else {
                NAMED_ENTITIES.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
            };
            ch.map(|c| (c, semi))
        });
        match decoded {
            Some((c, semi)) => {
                out.push(c);
                rest = &after[semi + 1..];
            }
            None => {
                out.push('&');
                rest = after;
            }
        }
    }
    out.push_str(rest);
}
