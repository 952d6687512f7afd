//! Hex text for keys and blocks.
//!
//! Blocks are written `X || Y` and keys `K^3 || K^2 || K^1 || K^0`, each word
//! big-endian with `n / 4` lowercase digits. Parsing ignores whitespace and
//! underscores and accepts an optional `0x` prefix.

use simeck_dfa::{Block, MasterKey, Variant, Word};

fn digits(text: &str) -> Result<String, String> {
    let t = text.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    let d: String = t
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .collect();
    match d.chars().find(|c| !c.is_ascii_hexdigit()) {
        Some(c) => Err(format!("'{c}' is not a hex digit")),
        None => Ok(d),
    }
}

fn words(text: &str, count: usize, variant: Variant) -> Result<Vec<Word>, String> {
    let d = digits(text)?;
    let w = variant.word_hex_digits();
    if d.len() != count * w {
        return Err(format!(
            "expected {} hex digits ({} bits) for {variant}, got {}",
            count * w,
            count as u32 * variant.word_size(),
            d.len()
        ));
    }
    Ok((0..count)
        .map(|i| Word::from_str_radix(&d[i * w..(i + 1) * w], 16).expect("checked digits"))
        .collect())
}

pub fn parse_block(text: &str, variant: Variant) -> Result<Block, String> {
    let w = words(text, 2, variant)?;
    Ok(Block::new(w[0], w[1]))
}

pub fn parse_key(text: &str, variant: Variant) -> Result<MasterKey, String> {
    let w = words(text, 4, variant)?;
    Ok(MasterKey::from_words_msb_first([w[0], w[1], w[2], w[3]]))
}

pub fn format_word(w: Word, variant: Variant) -> String {
    format!("{w:0width$x}", width = variant.word_hex_digits())
}

pub fn format_block(b: Block, variant: Variant) -> String {
    format_word(b.x, variant) + &format_word(b.y, variant)
}

pub fn format_key(k: &MasterKey, variant: Variant) -> String {
    k.words_msb_first()
        .iter()
        .map(|&w| format_word(w, variant))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_round_trip() {
        for v in Variant::ALL {
            let b = Block::new(0x0102_0304 & v.mask(), 0xa0b0_c0d0 & v.mask());
            assert_eq!(parse_block(&format_block(b, v), v).unwrap(), b);
        }
    }

    #[test]
    fn key_order_is_high_word_first() {
        let v = Variant::Simeck32_64;
        let k = parse_key("1918 1110 0908 0100", v).unwrap();
        assert_eq!(k.word(0), 0x0100);
        assert_eq!(k.word(3), 0x1918);
        assert_eq!(format_key(&k, v), "1918111009080100");
    }

    #[test]
    fn separators_and_prefix() {
        let v = Variant::Simeck48_96;
        assert_eq!(
            parse_block("0x726963_20646e", v).unwrap(),
            Block::new(0x726963, 0x20646e)
        );
    }

    #[test]
    fn bad_input() {
        let v = Variant::Simeck32_64;
        assert!(parse_block("6565687", v)
            .unwrap_err()
            .contains("expected 8 hex digits"));
        assert!(parse_key("zz", v).unwrap_err().contains("'z'"));
    }
}
