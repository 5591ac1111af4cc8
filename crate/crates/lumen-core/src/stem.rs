//! Porter suffix-stripping stemmer.
//!
//! Follows Martin Porter's canonical description of the 1980 algorithm,
//! including the author's two marked departures in step 2 (`bli` -> `ble`,
//! `logi` -> `log`). Operates on lowercase ASCII letters; words of one or
//! two characters are returned unchanged, as are words containing anything
//! other than `a-z`.

/// Stems a single lowercase word.
pub fn stem_word(word: &str) -> String {
    let b: Vec<u8> = word.bytes().collect();
    if b.len() <= 2 || !b.iter().all(|c| c.is_ascii_lowercase()) {
        return word.to_string();
    }
    let k = b.len() as isize - 1;
    let mut s = Stemmer { b, k, j: 0 };
    s.step1ab();
    // A one-letter residue (ies -> i) would make the later steps read before
    // the first letter; the canonical implementation skips them.
    if s.k > 0 {
        s.step1c();
        s.step2();
        s.step3();
        s.step4();
        s.step5();
    }
    String::from_utf8(s.b[..=s.k as usize].to_vec()).unwrap()
}

struct Stemmer {
    b: Vec<u8>,
    /// Index of the last letter of the current word.
    k: isize,
    /// Index of the last letter of the stem once a suffix has matched;
    /// -1 when the suffix is the whole word.
    j: isize,
}

impl Stemmer {
    fn at(&self, i: isize) -> u8 {
        self.b[i as usize]
    }

    fn cons(&self, i: isize) -> bool {
        match self.at(i) {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => {
                if i == 0 {
                    true
                } else {
                    !self.cons(i - 1)
                }
            }
            _ => true,
        }
    }

    /// Number of consonant-vowel sequences in `b[0..=j]`.
    fn measure(&self) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i > self.j {
                return n;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i > self.j {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i > self.j {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..=self.j).any(|i| !self.cons(i))
    }

    fn double_cons(&self, i: isize) -> bool {
        i >= 1 && self.at(i) == self.at(i - 1) && self.cons(i)
    }

    /// consonant - vowel - consonant ending at `i`, where the final consonant
    /// is not `w`, `x` or `y`.
    fn cvc(&self, i: isize) -> bool {
        if i < 2 || !self.cons(i) || self.cons(i - 1) || !self.cons(i - 2) {
            return false;
        }
        !matches!(self.at(i), b'w' | b'x' | b'y')
    }

    fn ends(&mut self, s: &[u8]) -> bool {
        let len = s.len() as isize;
        if len > self.k + 1 {
            return false;
        }
        let start = (self.k + 1 - len) as usize;
        if &self.b[start..=self.k as usize] != s {
            return false;
        }
        self.j = self.k - len;
        true
    }

    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate((self.j + 1) as usize);
        self.b.extend_from_slice(s);
        self.k = self.j + s.len() as isize;
    }

    fn replace_if_m(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    fn step1ab(&mut self) {
        if self.at(self.k) == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.at(self.k - 1) != b's' {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.k = self.j;
            self.b.truncate((self.k + 1) as usize);
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_cons(self.k) {
                self.k -= 1;
                if matches!(self.at(self.k), b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else {
                self.j = self.k;
                if self.measure() == 1 && self.cvc(self.k) {
                    self.set_to(b"e");
                }
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k as usize] = b'i';
        }
    }

    fn step2(&mut self) {
        match self.at(self.k - 1) {
            b'a' => {
                if self.ends(b"ational") {
                    self.replace_if_m(b"ate");
                } else if self.ends(b"tional") {
                    self.replace_if_m(b"tion");
                }
            }
            b'c' => {
                if self.ends(b"enci") {
                    self.replace_if_m(b"ence");
                } else if self.ends(b"anci") {
                    self.replace_if_m(b"ance");
                }
            }
            b'e' => {
                if self.ends(b"izer") {
                    self.replace_if_m(b"ize");
                }
            }
            b'l' => {
                if self.ends(b"bli") {
                    self.replace_if_m(b"ble");
                } else if self.ends(b"alli") {
                    self.replace_if_m(b"al");
                } else if self.ends(b"entli") {
                    self.replace_if_m(b"ent");
                } else if self.ends(b"eli") {
                    self.replace_if_m(b"e");
                } else if self.ends(b"ousli") {
                    self.replace_if_m(b"ous");
                }
            }
            b'o' => {
                if self.ends(b"ization") {
                    self.replace_if_m(b"ize");
                } else if self.ends(b"ation") {
                    self.replace_if_m(b"ate");
                } else if self.ends(b"ator") {
                    self.replace_if_m(b"ate");
                }
            }
            b's' => {
                if self.ends(b"alism") {
                    self.replace_if_m(b"al");
                } else if self.ends(b"iveness") {
                    self.replace_if_m(b"ive");
                } else if self.ends(b"fulness") {
                    self.replace_if_m(b"ful");
                } else if self.ends(b"ousness") {
                    self.replace_if_m(b"ous");
                }
            }
            b't' => {
                if self.ends(b"aliti") {
                    self.replace_if_m(b"al");
                } else if self.ends(b"iviti") {
                    self.replace_if_m(b"ive");
                } else if self.ends(b"biliti") {
                    self.replace_if_m(b"ble");
                }
            }
            b'g' => {
                if self.ends(b"logi") {
                    self.replace_if_m(b"log");
                }
            }
            _ => {}
        }
    }

    fn step3(&mut self) {
        match self.at(self.k) {
            b'e' => {
                if self.ends(b"icate") {
                    self.replace_if_m(b"ic");
                } else if self.ends(b"ative") {
                    self.replace_if_m(b"");
                } else if self.ends(b"alize") {
                    self.replace_if_m(b"al");
                }
            }
            b'i' => {
                if self.ends(b"iciti") {
                    self.replace_if_m(b"ic");
                }
            }
            b'l' => {
                if self.ends(b"ical") {
                    self.replace_if_m(b"ic");
                } else if self.ends(b"ful") {
                    self.replace_if_m(b"");
                }
            }
            b's' => {
                if self.ends(b"ness") {
                    self.replace_if_m(b"");
                }
            }
            _ => {}
        }
    }

    fn step4(&mut self) {
        let matched = match self.at(self.k - 1) {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant")
                    || self.ends(b"ement")
                    || self.ends(b"ment")
                    || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion") && self.j >= 0 && matches!(self.at(self.j), b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.k = self.j;
            self.b.truncate((self.k + 1) as usize);
        }
    }

    fn step5(&mut self) {
        self.j = self.k;
        if self.at(self.k) == b'e' {
            let a = self.measure();
            if a > 1 || (a == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.at(self.k) == b'l' && self.double_cons(self.k) {
            self.j = self.k;
            if self.measure() > 1 {
                self.k -= 1;
            }
        }
        self.b.truncate((self.k + 1) as usize);
    }
}
