fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic syllable count: maximal vowel groups, minus one for a silent
/// final "e" after a consonant (a final consonant + "le" keeps its syllable).
/// Never less than one.
pub fn count_syllables(word: &str) -> usize {
    let chars: Vec<char> = word.chars().flat_map(char::to_lowercase).collect();
    let mut groups: usize = 0;
    let mut in_group = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = chars.len();
    if n >= 2 && chars[n - 1] == 'e' && is_consonant(chars[n - 2]) {
        let consonant_le = chars[n - 2] == 'l' && n >= 3 && is_consonant(chars[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

fn is_consonant(c: char) -> bool {
    c.is_alphabetic() && !is_vowel(c)
}
