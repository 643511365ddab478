#!/usr/bin/env python3
"""Regenerate the bundled fixtures: catalog, templates, eval battery, goldens.

Run from the repository root after changing fixture definitions:

    python3 tools/make_fixtures.py

The golden prompt files under fixtures/prompts/ freeze the canonical byte
layout of each prompt structure; tests compare rendered output against them,
so regenerating goldens is a deliberate, reviewed act.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sqlcorpus.catalog import (  # noqa: E402
    Catalog,
    ColumnDef,
    Relationship,
    SqlType,
    TableDef,
    emit_catalog,
)
from sqlcorpus.prompts import (  # noqa: E402
    CLAIMER_COT,
    CLAIMER_KNOWLEDGE,
    CLAIMER_SQL,
    COT_INSTRUCTION,
    PromptSample,
    PromptStructure,
    build_system,
    render,
)

FIXTURES = ROOT / "fixtures"

BASE_INSTRUCTION = (
    "1. Join fact tables to dimensions using the declared key columns.\n"
    "2. Default to net revenue unless the question says otherwise."
)

INSTRUCTION_VARIANTS = [
    "1. Use the declared key columns when joining fact and dimension tables.\n"
    "2. Report net revenue unless asked otherwise.",
    "1. Always join through the declared keys.\n"
    "2. Net revenue is the default measure.",
    "1. Combine tables only on their declared key columns.\n"
    "2. Treat revenue as net of discounts unless told otherwise.",
    "1. Fact-to-dimension joins go through the declared keys.\n"
    "2. Answers use net revenue by default.",
    "1. Respect the declared join keys between tables.\n"
    "2. Use net revenue unless the question specifies another measure.",
    "1. Join on declared key columns only.\n"
    "2. Default measure: net revenue.",
    "1. Use declared keys for every join.\n"
    "2. Revenue means net revenue unless stated.",
    "1. Only the declared key columns may join tables.\n"
    "2. Net revenue is assumed when the question just says revenue.",
    "1. Link tables via their declared keys.\n"
    "2. Unless specified, compute net revenue.",
    "1. Joins must follow the declared key columns.\n"
    "2. When in doubt, report net revenue.",
]


def build_catalog() -> Catalog:
    def cols(*specs):
        return tuple(
            ColumnDef(
                name=name,
                data_type=SqlType(dtype),
                description=desc,
                is_filter=is_filter,
                is_metric_component=is_metric,
            )
            for name, dtype, desc, is_filter, is_metric in specs
        )

    tables = (
        TableDef(
            name="calendar",
            description="fiscal calendar lookup mapping days to fiscal periods",
            columns=cols(
                ("date_key", "integer", "surrogate key for one fiscal day", False, False),
                ("calendar_date", "date", "calendar date in ISO format", False, False),
                ("fiscal_year", "integer", "fiscal year the day belongs to", True, False),
                ("fiscal_week", "integer", "fiscal week number within the year", True, False),
            ),
        ),
        TableDef(
            name="customers",
            description="customer master data with loyalty attributes",
            columns=cols(
                ("customer_id", "integer", "unique customer identifier", True, False),
                ("segment", "text", "commercial segment of the customer", True, False),
                ("loyalty_tier", "text", "loyalty program tier name", True, False),
                ("signup_date", "date", "date the customer enrolled", False, False),
            ),
        ),
        TableDef(
            name="products",
            description="product master data with category hierarchy",
            columns=cols(
                ("product_id", "integer", "unique product identifier", False, False),
                ("product_name", "text", "display name of the product", True, False),
                ("category", "text", "merchandising category", True, False),
                ("department", "text", "owning department", True, False),
                ("unit_cost", "float", "standard unit cost", False, True),
            ),
        ),
        TableDef(
            name="sales",
            description="sales fact table, one row per sale line",
            columns=cols(
                ("sale_id", "integer", "unique sale line identifier", False, False),
                ("date_key", "integer", "fiscal day of the sale", False, False),
                ("store_id", "integer", "store where the sale happened", False, False),
                ("product_id", "integer", "product sold", False, False),
                ("customer_id", "integer", "buying customer", False, False),
                ("units", "integer", "units sold on the line", False, True),
                ("revenue", "float", "net revenue of the line", False, True),
                ("discount", "float", "discount amount applied, null when none", False, True),
                ("channel", "text", "sales channel, store or online", True, False),
            ),
        ),
        TableDef(
            name="stores",
            description="store master data with region assignments",
            columns=cols(
                ("store_id", "integer", "unique store identifier", False, False),
                ("store_name", "text", "display name of the store", True, False),
                ("region", "text", "sales region for reporting", True, False),
                ("banner", "text", "retail banner the store trades under", True, False),
                ("open_date", "date", "date the store opened", False, False),
            ),
        ),
    )
    relationships = (
        Relationship("sales", "date_key", "calendar", "date_key"),
        Relationship("sales", "store_id", "stores", "store_id"),
        Relationship("sales", "product_id", "products", "product_id"),
        Relationship("sales", "customer_id", "customers", "customer_id"),
    )
    return Catalog(tables=tables, relationships=relationships)


def build_metrics() -> list[dict]:
    return [
        {"id": "m_avg_revenue", "question_phrase": "average revenue per sale",
         "sql_fragment": "AVG(s.revenue)"},
        {"id": "m_max_sale", "question_phrase": "largest single sale revenue",
         "sql_fragment": "MAX(s.revenue)"},
        {"id": "m_sale_count", "question_phrase": "number of sales",
         "sql_fragment": "COUNT(*)"},
        {"id": "m_total_discount", "question_phrase": "total discount amount",
         "sql_fragment": "SUM(s.discount)"},
        {"id": "m_total_revenue", "question_phrase": "total revenue",
         "sql_fragment": "SUM(s.revenue)"},
        {"id": "m_total_units", "question_phrase": "total units sold",
         "sql_fragment": "SUM(s.units)"},
    ]


def build_filters() -> list[dict]:
    filters = []
    for week in range(1, 53):
        filters.append(
            {
                "id": f"f_week_{week:02d}",
                "column_ref": ["calendar", "fiscal_week"],
                "question_phrase": f"fiscal week {week}",
                "sql_literal": str(week),
            }
        )
    for year in range(2019, 2025):
        filters.append(
            {
                "id": f"f_year_{year}",
                "column_ref": ["calendar", "fiscal_year"],
                "question_phrase": f"fiscal year {year}",
                "sql_literal": str(year),
            }
        )
    for n in range(1, 61):
        filters.append(
            {
                "id": f"f_store_{n:03d}",
                "column_ref": ["stores", "store_name"],
                "question_phrase": f"store {n:03d}",
                "sql_literal": f"'Store {n:03d}'",
            }
        )
    for n in range(1, 61):
        filters.append(
            {
                "id": f"f_prod_{n:03d}",
                "column_ref": ["products", "product_name"],
                "question_phrase": f"product {n:03d}",
                "sql_literal": f"'Product {n:03d}'",
            }
        )
    for n in range(1, 61):
        filters.append(
            {
                "id": f"f_cust_{1000 + n}",
                "column_ref": ["customers", "customer_id"],
                "question_phrase": f"customer {1000 + n}",
                "sql_literal": str(1000 + n),
            }
        )
    return filters


def build_templates() -> list[dict]:
    week_filters = [f"f_week_{w:02d}" for w in range(1, 53)]
    year_filters = [f"f_year_{y}" for y in range(2019, 2025)]
    store_filters = [f"f_store_{n:03d}" for n in range(1, 61)]
    prod_filters = [f"f_prod_{n:03d}" for n in range(1, 61)]
    cust_filters = [f"f_cust_{1000 + n}" for n in range(1, 61)]
    return [
        {
            "template_id": "t_calendar",
            "question_template": "What is the {metric} in {filter}?",
            "sql_template": (
                "SELECT {metric} FROM sales AS s "
                "JOIN calendar AS c ON s.date_key = c.date_key "
                "WHERE c.{filter_column} = {filter}"
            ),
            "applicable_metrics": [],
            "applicable_filters": week_filters + year_filters,
            "anchor": [
                ["calendar", "date_key"], ["calendar", "fiscal_week"],
                ["calendar", "fiscal_year"], ["sales", "date_key"],
                ["sales", "discount"], ["sales", "revenue"], ["sales", "units"],
            ],
        },
        {
            "template_id": "t_customer",
            "question_template": "What is the {metric} from {filter}?",
            "sql_template": (
                "SELECT {metric} FROM sales AS s "
                "JOIN customers AS cu ON s.customer_id = cu.customer_id "
                "WHERE cu.{filter_column} = {filter}"
            ),
            "applicable_metrics": [],
            "applicable_filters": cust_filters,
            "anchor": [
                ["customers", "customer_id"], ["sales", "customer_id"],
                ["sales", "discount"], ["sales", "revenue"], ["sales", "units"],
            ],
        },
        {
            "template_id": "t_product",
            "question_template": "What is the {metric} for {filter}?",
            "sql_template": (
                "SELECT {metric} FROM sales AS s "
                "JOIN products AS p ON s.product_id = p.product_id "
                "WHERE p.{filter_column} = {filter}"
            ),
            "applicable_metrics": [],
            "applicable_filters": prod_filters,
            "anchor": [
                ["products", "product_id"], ["products", "product_name"],
                ["sales", "discount"], ["sales", "product_id"],
                ["sales", "revenue"], ["sales", "units"],
            ],
        },
        {
            "template_id": "t_region_mix",
            "question_template": "What is the {metric} for {filter} by region?",
            "sql_template": (
                "SELECT st.region, {metric} FROM sales AS s "
                "JOIN stores AS st ON s.store_id = st.store_id "
                "JOIN products AS p ON s.product_id = p.product_id "
                "WHERE p.{filter_column} = {filter} GROUP BY st.region"
            ),
            "applicable_metrics": [],
            "applicable_filters": prod_filters,
            "anchor": [
                ["products", "product_id"], ["products", "product_name"],
                ["sales", "discount"], ["sales", "product_id"],
                ["sales", "revenue"], ["sales", "store_id"], ["sales", "units"],
                ["stores", "region"], ["stores", "store_id"],
            ],
        },
        {
            "template_id": "t_store",
            "question_template": "What is the {metric} at {filter}?",
            "sql_template": (
                "SELECT {metric} FROM sales AS s "
                "JOIN stores AS st ON s.store_id = st.store_id "
                "WHERE st.{filter_column} = {filter}"
            ),
            "applicable_metrics": [],
            "applicable_filters": store_filters,
            "anchor": [
                ["sales", "discount"], ["sales", "revenue"],
                ["sales", "store_id"], ["sales", "units"],
                ["stores", "store_id"], ["stores", "store_name"],
            ],
        },
    ]


GOLDEN_SCHEMA_BLOCK = (
    "CREATE TABLE stores (\n"
    "  store_id integer unique store identifier\n"
    "  region text sales region for reporting\n"
    ")"
)
GOLDEN_QUESTION = "What is the total revenue for the north region?"
GOLDEN_SQL = (
    "SELECT SUM(s.revenue) FROM sales AS s "
    "JOIN stores AS st ON s.store_id = st.store_id WHERE st.region = 'north'"
)
GOLDEN_COT_ANSWER = (
    "1. Tables: sales, stores\n"
    "2. Columns: sales.revenue, sales.store_id, stores.store_id, stores.region\n"
    "3. Join columns: sales.store_id = stores.store_id\n"
    f"4. SQL: {GOLDEN_SQL}"
)


def golden_samples() -> dict[PromptStructure, PromptSample]:
    return {
        PromptStructure.META_SCHEMA: PromptSample(
            question=GOLDEN_QUESTION,
            answer=GOLDEN_SQL,
            structure=PromptStructure.META_SCHEMA,
            system=build_system(CLAIMER_SQL, GOLDEN_SCHEMA_BLOCK),
            instruction=BASE_INSTRUCTION,
        ),
        PromptStructure.META_COT: PromptSample(
            question=GOLDEN_QUESTION,
            answer=GOLDEN_COT_ANSWER,
            structure=PromptStructure.META_COT,
            system=CLAIMER_COT,
            instruction=COT_INSTRUCTION,
        ),
        PromptStructure.META_KNOWLEDGE: PromptSample(
            question="Which columns does the table stores contain?",
            answer="store_id, store_name, region, banner, open_date",
            structure=PromptStructure.META_KNOWLEDGE,
            system=CLAIMER_KNOWLEDGE,
        ),
        PromptStructure.BASE_PROMPT_1: PromptSample(
            question=GOLDEN_QUESTION,
            answer=GOLDEN_SQL,
            structure=PromptStructure.BASE_PROMPT_1,
            system=build_system(CLAIMER_SQL, GOLDEN_SCHEMA_BLOCK),
            instruction=BASE_INSTRUCTION,
        ),
        PromptStructure.BASE_PROMPT_2: PromptSample(
            question=GOLDEN_QUESTION,
            answer=GOLDEN_SQL,
            structure=PromptStructure.BASE_PROMPT_2,
            system=GOLDEN_SCHEMA_BLOCK,
        ),
    }


SEED_SQL = """\
CREATE TABLE calendar (
  date_key INTEGER,
  calendar_date TEXT,
  fiscal_year INTEGER,
  fiscal_week INTEGER
);
CREATE TABLE customers (
  customer_id INTEGER,
  segment TEXT,
  loyalty_tier TEXT,
  signup_date TEXT
);
CREATE TABLE products (
  product_id INTEGER,
  product_name TEXT,
  category TEXT,
  department TEXT,
  unit_cost REAL
);
CREATE TABLE stores (
  store_id INTEGER,
  store_name TEXT,
  region TEXT,
  banner TEXT,
  open_date TEXT
);
CREATE TABLE sales (
  sale_id INTEGER,
  date_key INTEGER,
  store_id INTEGER,
  product_id INTEGER,
  customer_id INTEGER,
  units INTEGER,
  revenue REAL,
  discount REAL,
  channel TEXT
);
INSERT INTO calendar VALUES
  (1, '2024-02-04', 2024, 1),
  (2, '2024-02-05', 2024, 1),
  (3, '2024-02-11', 2024, 2),
  (4, '2024-02-12', 2024, 2),
  (5, '2023-02-05', 2023, 1),
  (6, '2023-02-12', 2023, 2);
INSERT INTO customers VALUES
  (1001, 'consumer', 'gold', '2021-03-01'),
  (1002, 'consumer', 'silver', '2022-06-10'),
  (1003, 'business', 'gold', '2020-01-15'),
  (1004, 'business', 'none', '2023-09-20');
INSERT INTO products VALUES
  (1, 'Product 001', 'grocery', 'food', 1.50),
  (2, 'Product 002', 'grocery', 'food', 2.25),
  (3, 'Product 003', 'electronics', 'general', 45.00),
  (4, 'Product 004', 'apparel', 'softlines', 12.00);
INSERT INTO stores VALUES
  (1, 'Store 001', 'north', 'mainline', '2015-05-01'),
  (2, 'Store 002', 'north', 'outlet', '2018-11-12'),
  (3, 'Store 003', 'south', 'mainline', '2012-04-20'),
  (4, 'Store 004', 'east', 'mainline', '2020-08-30');
INSERT INTO sales VALUES
  (1,  1, 1, 1, 1001, 3,  4.50,  NULL,  'store'),
  (2,  1, 1, 3, 1003, 1, 45.00,  5.00,  'store'),
  (3,  2, 2, 2, 1002, 2,  4.50,  NULL,  'online'),
  (4,  2, 3, 1, 1004, 5,  7.50,  0.75,  'store'),
  (5,  3, 3, 4, 1001, 1, 12.00,  NULL,  'online'),
  (6,  3, 4, 2, 1002, 4,  9.00,  1.00,  'store'),
  (7,  4, 1, 4, 1003, 2, 24.00,  2.40,  'store'),
  (8,  4, 2, 3, 1004, 1, 45.00,  NULL,  'online'),
  (9,  5, 3, 1, 1001, 6,  9.00,  NULL,  'store'),
  (10, 5, 4, 1, 1002, 2,  3.00,  0.30,  'online'),
  (11, 6, 1, 2, 1003, 3,  6.75,  NULL,  'store'),
  (12, 6, 2, 4, 1004, 1, 12.00,  1.20,  'store'),
  (13, 4, 3, 3, 1001, 2, 90.00, 10.00,  'online'),
  (14, 2, 4, 4, 1002, 3, 36.00,  NULL,  'store');
"""


def build_eval_cases() -> list[dict]:
    """The evaluator oracle battery: each case's verdict is known by hand."""
    gold_regions = "SELECT store_id FROM stores"
    cases = [
        # 1-2: reflexivity and aliasing
        ("verbatim", "SELECT COUNT(*) FROM sales", "SELECT COUNT(*) FROM sales",
         "aliasing"),
        ("alias", "SELECT revenue AS total FROM sales", "SELECT revenue FROM sales",
         "aliasing"),
        # 3-4: ordering semantics
        ("reorder_unordered",
         "SELECT store_id FROM stores ORDER BY store_id DESC", gold_regions,
         "ordering"),
        ("reorder_ordered",
         "SELECT store_id FROM stores ORDER BY store_id DESC",
         "SELECT store_id FROM stores ORDER BY store_id ASC", "ordering"),
        # 5-6: float tolerance
        ("float_close", "SELECT 0.3333333", "SELECT 1.0/3.0", "tolerance"),
        ("float_far", "SELECT 0.3330", "SELECT 1.0/3.0", "tolerance"),
        ("int_vs_float", "SELECT TOTAL(units) FROM sales",
         "SELECT SUM(units) FROM sales", "tolerance"),
        # 8-12: predicted errors
        ("syntax_error", "SELEC revenue FROM sales", "SELECT revenue FROM sales",
         "errors"),
        ("unknown_table", "SELECT * FROM salez", "SELECT * FROM sales", "errors"),
        ("mutating_delete", "DELETE FROM sales", "SELECT COUNT(*) FROM sales",
         "errors"),
        ("mutating_insert",
         "INSERT INTO stores VALUES (9, 'Store 999', 'west', 'outlet', '2024-01-01')",
         "SELECT COUNT(*) FROM stores", "errors"),
        ("mutating_ddl", "DROP TABLE sales", "SELECT COUNT(*) FROM sales", "errors"),
        # 13-14: final-SQL extraction from model output
        ("cot_steps",
         "1. Tables: sales\n2. Columns: none\n3. Join columns: none\n"
         "4. SQL: SELECT COUNT(*) FROM sales",
         "SELECT COUNT(*) FROM sales", "extraction"),
        ("fenced_block",
         "The answer is:\n```sql\nSELECT COUNT(*) FROM sales\n```",
         "SELECT COUNT(*) FROM sales", "extraction"),
        ("multi_statement", "SELECT 1; SELECT store_id FROM stores",
         gold_regions, "extraction"),
        # 16-18: shape mismatches
        ("extra_column", "SELECT store_id, region FROM stores", gold_regions,
         "shape"),
        ("missing_rows", "SELECT store_id FROM stores LIMIT 2", gold_regions,
         "shape"),
        ("column_swap", "SELECT region, store_id FROM stores",
         "SELECT store_id, region FROM stores", "shape"),
        # 19-21: semantic equivalences
        ("implicit_join",
         "SELECT SUM(s.revenue) FROM sales s, stores st "
         "WHERE s.store_id = st.store_id AND st.region = 'north'",
         "SELECT SUM(s.revenue) FROM sales AS s "
         "JOIN stores AS st ON s.store_id = st.store_id WHERE st.region = 'north'",
         "equivalence"),
        ("commuted_where",
         "SELECT sale_id FROM sales WHERE channel = 'store' AND units > 2",
         "SELECT sale_id FROM sales WHERE units > 2 AND channel = 'store'",
         "equivalence"),
        ("in_subquery",
         "SELECT sale_id FROM sales WHERE store_id IN "
         "(SELECT store_id FROM stores WHERE region = 'north')",
         "SELECT s.sale_id FROM sales AS s JOIN stores AS st "
         "ON s.store_id = st.store_id WHERE st.region = 'north'",
         "equivalence"),
        # 22-25: value-level differences
        ("wrong_filter",
         "SELECT SUM(revenue) FROM sales WHERE channel = 'online'",
         "SELECT SUM(revenue) FROM sales WHERE channel = 'store'", "filters"),
        ("missing_distinct", "SELECT region FROM stores",
         "SELECT DISTINCT region FROM stores", "filters"),
        ("null_matches_null",
         "SELECT discount FROM sales WHERE discount IS NULL",
         "SELECT NULL FROM sales WHERE discount IS NULL", "nulls"),
        ("null_vs_zero",
         "SELECT 0 FROM sales WHERE discount IS NULL",
         "SELECT NULL FROM sales WHERE discount IS NULL", "nulls"),
        # 26-28: text and aggregate semantics
        ("text_case", "SELECT 'North'", "SELECT 'north'", "text"),
        ("wrong_aggregate", "SELECT AVG(revenue) FROM sales",
         "SELECT SUM(revenue) FROM sales", "aggregates"),
        ("group_by_match",
         "SELECT region, SUM(revenue) FROM sales JOIN stores "
         "ON sales.store_id = stores.store_id GROUP BY region ORDER BY region",
         "SELECT st.region, SUM(s.revenue) FROM sales AS s JOIN stores AS st "
         "ON s.store_id = st.store_id GROUP BY st.region ORDER BY st.region",
         "aggregates"),
        # 29-31: empty sets and runaway queries
        ("both_empty", "SELECT store_id FROM stores WHERE store_id < 0",
         "SELECT store_id FROM stores WHERE store_id > 999", "empty"),
        ("empty_vs_rows", "SELECT store_id FROM stores WHERE store_id > 999",
         gold_regions, "empty"),
        ("runaway_recursion",
         "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM c) "
         "SELECT x FROM c",
         "SELECT 1", "errors"),
        # 32: ordered top-k with alias
        ("top_k",
         "SELECT revenue AS r FROM sales ORDER BY revenue DESC LIMIT 3",
         "SELECT revenue FROM sales ORDER BY revenue DESC LIMIT 3", "ordering"),
    ]
    tables = ["calendar", "customers", "products", "sales", "stores"]
    return [
        {
            "id": f"case_{i:02d}_{name}",
            "predicted_sql": predicted,
            "gold_sql": gold,
            "database_ref": "fixture",
            "meta": {"category": category, "table": tables[i % len(tables)]},
        }
        for i, (name, predicted, gold, category) in enumerate(cases, start=1)
    ]


CONFIG = {
    "catalog": "catalog.json",
    "templates": "templates.json",
    "metrics": "metrics.json",
    "filters": "filters.json",
    "instruction": BASE_INSTRUCTION,
    "instruction_variants": "instruction_variants.txt",
    "instruction_pool_size": 8,
    "output_dir": "../out",
    "seed": 1729,
    "structures": {
        "schema": "meta_schema",
        "cot": "meta_cot",
        "knowledge": "meta_knowledge",
    },
    "schema_mode": "exact",
    "families": ["schema", "cot", "knowledge"],
    "test_size": 500,
    "ladder_sizes": [250, 500, 750, 1000],
    "eval": {
        "database": "eval/fixture.db",
        "seed_script": "eval/seed_fixture.sql",
        "cases": "eval/cases.jsonl",
        "timeout_s": 10.0,
        "row_cap": 100000,
        "tolerance": 1e-6,
    },
}


def dump_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def main() -> None:
    catalog = build_catalog()
    (FIXTURES / "prompts").mkdir(parents=True, exist_ok=True)
    (FIXTURES / "eval").mkdir(parents=True, exist_ok=True)

    (FIXTURES / "catalog.json").write_text(emit_catalog(catalog), encoding="utf-8")
    dump_json(FIXTURES / "metrics.json", build_metrics())
    dump_json(FIXTURES / "filters.json", build_filters())
    dump_json(FIXTURES / "templates.json", build_templates())
    (FIXTURES / "instruction_variants.txt").write_text(
        "\n".join(v.replace("\n", " / ") for v in INSTRUCTION_VARIANTS) + "\n",
        encoding="utf-8",
    )
    dump_json(FIXTURES / "config.json", CONFIG)

    for structure, sample in golden_samples().items():
        (FIXTURES / "prompts" / f"{structure.value}.txt").write_text(
            render(sample), encoding="utf-8"
        )

    (FIXTURES / "eval" / "seed_fixture.sql").write_text(SEED_SQL, encoding="utf-8")
    cases = build_eval_cases()
    (FIXTURES / "eval" / "cases.jsonl").write_text(
        "\n".join(json.dumps(c, ensure_ascii=False) for c in cases) + "\n",
        encoding="utf-8",
    )
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
