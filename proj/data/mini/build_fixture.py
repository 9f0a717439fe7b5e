#!/usr/bin/env python3
# Copyright 2026 The sqlharness Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled mini dataset (two SQLite databases + dev.json)."""

import json
import os
import sqlite3

HERE = os.path.dirname(os.path.abspath(__file__))

CARD_GAMES = """
CREATE TABLE cards (
  id INTEGER PRIMARY KEY,
  name TEXT,
  type TEXT,
  rarity TEXT,
  toughness TEXT,
  power TEXT,
  watermark TEXT,
  uuid TEXT,
  setCode TEXT,
  convertedManaCost REAL
);
CREATE TABLE foreign_data (
  id INTEGER PRIMARY KEY,
  uuid TEXT,
  language TEXT,
  name TEXT
);
CREATE TABLE sets (
  id INTEGER PRIMARY KEY,
  code TEXT,
  name TEXT,
  releaseDate TEXT,
  totalSetSize INTEGER
);
CREATE VIEW rare_cards AS SELECT id, name FROM cards WHERE rarity = 'rare';
"""

CARDS = [
    (1, "Abzan Guide", "Creature", "common", "4", "4", "abzan", "u-01", "KTK", 6.0),
    (2, "Anafenza", "Creature", "mythic", "4", "4", "abzan", "u-02", "KTK", 3.0),
    (3, "Siege Rhino", "Creature", "rare", "5", "4", "abzan", "u-03", "KTK", 4.0),
    (4, "Colossus", "Artifact Creature", "rare", "99", "99", None, "u-04", "M15", 9.0),
    (5, "Shock", "Instant", "common", None, None, None, "u-05", "M15", 1.0),
    (6, "Llanowar Elves", "Creature", "common", "1", "1", None, "u-06", "M15", 1.0),
    (7, "Dragon Whelp", "Creature", "uncommon", "3", "2", None, "u-07", "M15", 4.0),
    (8, "Temur Charm", "Instant", "uncommon", None, None, "temur", "u-08", "KTK", 3.0),
    (9, "Ancient Colossus", "Creature", "rare", "99", "5", None, "u-09", "DOM", 8.0),
    (10, "Serra Angel", "Creature", "uncommon", "4", "4", None, "u-10", "DOM", 5.0),
    (11, "Karn", "Planeswalker", "mythic", None, None, None, "u-11", "DOM", 4.0),
    (12, "Opt", "Instant", "common", None, None, None, "u-12", "DOM", 1.0),
]

FOREIGN = [
    (1, "u-01", "German", "Abzan-Fuhrer"),
    (2, "u-01", "French", "Guide abzan"),
    (3, "u-02", "Japanese", "Anafenza JP"),
    (4, "u-03", "German", "Belagerungsnashorn"),
    (5, "u-03", "French", "Rhino de siege"),
    (6, "u-03", "Japanese", "Siege Rhino JP"),
    (7, "u-07", "German", "Drachenwelpe"),
    (8, "u-10", "French", "Ange de Serra"),
    (9, "u-11", "German", "Karn DE"),
    (10, "u-04", "German", "Koloss"),
]

SETS = [
    (1, "KTK", "Khans of Tarkir", "2014-09-26", 269),
    (2, "M15", "Magic 2015", "2014-07-18", 284),
    (3, "DOM", "Dominaria", "2018-04-27", 280),
    (4, "WAR", "War of the Spark", "2019-05-03", 264),
]

SCHOOLS = """
CREATE TABLE schools (
  CDSCode TEXT PRIMARY KEY,
  County TEXT,
  District TEXT,
  School TEXT,
  City TEXT,
  Charter INTEGER,
  OpenDate TEXT
);
CREATE TABLE satscores (
  cds TEXT PRIMARY KEY,
  sname TEXT,
  NumTstTakr INTEGER,
  AvgScrMath INTEGER,
  AvgScrRead INTEGER
);
CREATE TABLE frpm (
  CDSCode TEXT PRIMARY KEY,
  "School Name" TEXT,
  "Enrollment (K-12)" REAL,
  "Free Meal Count (K-12)" REAL
);
"""

SCHOOL_ROWS = [
    ("c01", "Alameda", "Oakland Unified", "Oakland High", "Oakland", 0, "1998-08-20"),
    ("c02", "Alameda", "Oakland Unified", "Lighthouse Charter", "Oakland", 1, "2002-09-01"),
    ("c03", "Alameda", "Berkeley Unified", "Berkeley High", "Berkeley", 0, "1995-08-25"),
    ("c04", "Alameda", "Fremont Unified", "Mission Charter", "Fremont", 1, "2008-08-15"),
    ("c05", "Contra Costa", "Mt. Diablo Unified", "Ygnacio Valley High", "Concord", 0, "2001-08-30"),
    ("c06", "Contra Costa", "San Ramon Valley", "Dougherty Valley High", "San Ramon", 0, "2007-08-22"),
    ("c07", "Contra Costa", "West Contra Costa", "Richmond Charter", "Richmond", 1, "2012-08-16"),
    ("c08", "Marin", "Tamalpais Union", "Redwood High", "Larkspur", 0, "1996-09-03"),
    ("c09", "Marin", "Novato Unified", "Novato Charter", "Novato", 1, "2005-08-29"),
    ("c10", "Alameda", "Oakland Unified", "Skyline High", "Oakland", 0, "2003-08-25"),
]

SAT_ROWS = [
    ("c01", "Oakland High", 310, 455, 440),
    ("c02", "Lighthouse Charter", 45, 470, 462),
    ("c03", "Berkeley High", 620, 560, 575),
    ("c05", "Ygnacio Valley High", 180, 440, 430),
    ("c06", "Dougherty Valley High", 540, 640, 600),
    ("c07", "Richmond Charter", 30, None, 410),
    ("c08", "Redwood High", 260, 600, 590),
    ("c10", "Skyline High", 200, 480, 470),
]

FRPM_ROWS = [
    ("c01", "Oakland High", 1700.0, 1100.0),
    ("c02", "Lighthouse Charter", 700.0, 520.0),
    ("c03", "Berkeley High", 3100.0, 700.0),
    ("c04", "Mission Charter", 400.0, 90.0),
    ("c05", "Ygnacio Valley High", 1500.0, 800.0),
    ("c06", "Dougherty Valley High", 3000.0, 150.0),
    ("c07", "Richmond Charter", 500.0, 430.0),
    ("c09", "Novato Charter", 300.0, 60.0),
]

QUESTIONS = [
    ("card_games", "How many cards are there with toughness of 99?",
     "SELECT COUNT(id) FROM cards WHERE toughness = 99", "simple", "toughness of 99 refers to toughness = 99"),
    ("card_games", "Name the foreign name of the card that has an abzan watermark? List out the type of this card.",
     "SELECT DISTINCT T1.name, T1.type FROM cards AS T1 INNER JOIN foreign_data AS T2 ON T2.uuid = T1.uuid WHERE T1.watermark = 'abzan'",
     "moderate", ""),
    ("card_games", "List the names of the cards in the set with code KTK.",
     "SELECT T1.name FROM cards AS T1 JOIN sets AS T2 ON T1.setCode = T2.code WHERE T2.code = 'KTK' ORDER BY T1.name",
     "simple", ""),
    ("card_games", "Which language has the most foreign translations?",
     "SELECT language FROM foreign_data GROUP BY language ORDER BY COUNT(*) DESC LIMIT 1", "moderate", ""),
    ("card_games", "What percentage of cards are rare?",
     "SELECT CAST(SUM(CASE WHEN rarity = 'rare' THEN 1 ELSE 0 END) AS REAL) * 100 / COUNT(id) FROM cards",
     "moderate", "percentage = count(rarity = 'rare') * 100 / count(id)"),
    ("card_games", "Name the sets that contain more than three cards.",
     "SELECT T2.name FROM sets AS T2 WHERE T2.code IN (SELECT setCode FROM cards GROUP BY setCode HAVING COUNT(*) > 3)",
     "challenging", ""),
    ("card_games", "For each set, how many cards does it contain? List by count descending.",
     "WITH counts AS (SELECT setCode, COUNT(*) AS n FROM cards GROUP BY setCode) SELECT s.name, c.n FROM sets s JOIN counts c ON c.setCode = s.code ORDER BY c.n DESC, s.name",
     "challenging", ""),
    ("card_games", "List all information about the sets released before 2015.",
     "SELECT * FROM sets WHERE releaseDate < '2015-01-01'", "simple", ""),
    ("card_games", "Which cards have a German translation?",
     "SELECT name FROM cards c WHERE EXISTS (SELECT 1 FROM foreign_data f WHERE f.uuid = c.uuid AND f.language = 'German')",
     "challenging", ""),
    ("card_games", "Which card has the highest converted mana cost?",
     "SELECT name FROM cards ORDER BY convertedManaCost DESC LIMIT 1", "simple", ""),
    ("card_games", "Name the sets that have cards with a Japanese translation.",
     "SELECT DISTINCT T3.name FROM cards T1 JOIN foreign_data T2 ON T1.uuid = T2.uuid JOIN sets T3 ON T3.code = T1.setCode WHERE T2.language = 'Japanese'",
     "challenging", ""),
    ("card_games", "List card names with power 4 together with French foreign names.",
     "SELECT name FROM cards WHERE power = '4' UNION SELECT name FROM foreign_data WHERE language = 'French'",
     "moderate", ""),
    ("california_schools", "How many charter schools are there in Alameda county?",
     "SELECT COUNT(CDSCode) FROM schools WHERE County = 'Alameda' AND Charter = 1", "simple", "charter schools refers to Charter = 1"),
    ("california_schools", "Which school in Contra Costa has the highest number of test takers?",
     "SELECT T1.School FROM schools AS T1 INNER JOIN satscores AS T2 ON T1.CDSCode = T2.cds WHERE T1.County = 'Contra Costa' ORDER BY T2.NumTstTakr DESC LIMIT 1",
     "moderate", ""),
    ("california_schools", "Which schools have a free meal rate above 50%?",
     "SELECT `School Name` FROM frpm WHERE `Free Meal Count (K-12)` / `Enrollment (K-12)` > 0.5 ORDER BY `School Name`",
     "moderate", "free meal rate = Free Meal Count (K-12) / Enrollment (K-12)"),
    ("california_schools", "What is the average SAT math score?",
     "SELECT AVG(AvgScrMath) FROM satscores WHERE AvgScrMath IS NOT NULL", "simple", ""),
    ("california_schools", "Which cities have at least two schools? Give the count.",
     "SELECT T1.City, COUNT(*) FROM schools T1 GROUP BY T1.City HAVING COUNT(*) >= 2 ORDER BY T1.City",
     "moderate", ""),
    ("california_schools", "Which school has the highest average reading score?",
     "SELECT sname FROM satscores WHERE AvgScrRead = (SELECT MAX(AvgScrRead) FROM satscores)", "moderate", ""),
    ("california_schools", "List the school names and districts of schools opened between 2000 and 2010.",
     "SELECT T2.\"School Name\", T1.District FROM schools T1 JOIN frpm T2 ON T1.CDSCode = T2.CDSCode WHERE T1.OpenDate BETWEEN '2000-01-01' AND '2010-12-31' ORDER BY T2.\"School Name\"",
     "challenging", ""),
    ("california_schools", "How many districts have non-charter schools?",
     "SELECT COUNT(*) FROM (SELECT DISTINCT District FROM schools WHERE Charter = 0)", "simple", ""),
    ("california_schools", "How many schools opened in each year?",
     "SELECT strftime('%Y', OpenDate) AS yr, COUNT(*) FROM schools GROUP BY yr ORDER BY yr", "moderate", ""),
    ("california_schools", "What is the average SAT math score per county? Sort from highest.",
     "SELECT T1.County, AVG(T2.AvgScrMath) AS avg_math FROM schools T1 LEFT JOIN satscores T2 ON T1.CDSCode = T2.cds GROUP BY T1.County ORDER BY avg_math DESC, T1.County",
     "challenging", ""),
]


def build(db_id, ddl, inserts):
    folder = os.path.join(HERE, "databases", db_id)
    os.makedirs(folder, exist_ok=True)
    path = os.path.join(folder, db_id + ".sqlite")
    if os.path.exists(path):
        os.remove(path)
    con = sqlite3.connect(path)
    con.executescript(ddl)
    for sql, rows in inserts:
        con.executemany(sql, rows)
    con.commit()
    con.execute("VACUUM")
    con.close()


def main():
    build("card_games", CARD_GAMES, [
        ("INSERT INTO cards VALUES (?,?,?,?,?,?,?,?,?,?)", CARDS),
        ("INSERT INTO foreign_data VALUES (?,?,?,?)", FOREIGN),
        ("INSERT INTO sets VALUES (?,?,?,?,?)", SETS),
    ])
    build("california_schools", SCHOOLS, [
        ("INSERT INTO schools VALUES (?,?,?,?,?,?,?)", SCHOOL_ROWS),
        ("INSERT INTO satscores VALUES (?,?,?,?,?)", SAT_ROWS),
        ("INSERT INTO frpm VALUES (?,?,?,?)", FRPM_ROWS),
    ])
    questions = []
    for i, (db_id, question, sql, difficulty, evidence) in enumerate(QUESTIONS):
        questions.append({"question_id": i, "db_id": db_id, "question": question,
                          "evidence": evidence, "SQL": sql, "difficulty": difficulty})
    with open(os.path.join(HERE, "dev.json"), "w") as f:
        json.dump(questions, f, indent=2)
        f.write("\n")
    with open(os.path.join(HERE, "manifest.json"), "w") as f:
        json.dump({"name": "mini", "questions_path": "dev.json", "databases_root": "databases"}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
