"""Hand-verified extraction oracle for the SQL analyzer.

Each case lists the exact tables, qualified columns, and join pairs a
statement touches, derived by hand from the statement text and the battery
catalog. Ordering is first-appearance under the documented walk order
(CTEs, then per select core: FROM bindings, select items, ON clauses,
WHERE, GROUP BY, HAVING, then the outer ORDER BY).
"""

from conftest import make_catalog

BATTERY_CATALOG = make_catalog(
    {
        "orders": [
            ("order_id", "integer"),
            ("customer_id", "integer"),
            ("amount", "float"),
            ("order_date", "date"),
            ("status", "text"),
        ],
        "customers": [
            ("customer_id", "integer"),
            ("name", "text"),
            ("region", "text"),
        ],
        "items": [
            ("item_id", "integer"),
            ("order_id", "integer"),
            ("product", "text"),
            ("qty", "integer"),
            ("price", "float"),
        ],
        "a": [("id", "integer"), ("x", "float"), ("val", "float")],
        "b": [("aid", "integer"), ("y", "float"), ("val", "float")],
        "c": [("bid", "integer"), ("z", "float")],
    },
    relationships=[
        ("orders", "customer_id", "customers", "customer_id"),
        ("items", "order_id", "orders", "order_id"),
    ],
)

# (label, sql, tables, columns, join_pairs)
CASES = [
    (
        "no_relations",
        "SELECT 1",
        (),
        (),
        (),
    ),
    (
        "bare_columns",
        "SELECT order_id, amount FROM orders",
        ("orders",),
        (("orders", "order_id"), ("orders", "amount")),
        (),
    ),
    (
        "aliased_filter",
        "SELECT o.amount FROM orders AS o WHERE o.status = 'open'",
        ("orders",),
        (("orders", "amount"), ("orders", "status")),
        (),
    ),
    (
        "unqualified_resolution",
        "SELECT name FROM customers WHERE region = 'west'",
        ("customers",),
        (("customers", "name"), ("customers", "region")),
        (),
    ),
    (
        "join_with_aggregate",
        "SELECT o.order_id, SUM(i.price) FROM orders o "
        "JOIN items i ON o.order_id = i.order_id GROUP BY o.order_id",
        ("orders", "items"),
        (("orders", "order_id"), ("items", "price"), ("items", "order_id")),
        ((("orders", "order_id"), ("items", "order_id")),),
    ),
    (
        "implicit_join",
        "SELECT c.name, o.amount FROM customers c, orders o "
        "WHERE c.customer_id = o.customer_id",
        ("customers", "orders"),
        (
            ("customers", "name"),
            ("orders", "amount"),
            ("customers", "customer_id"),
            ("orders", "customer_id"),
        ),
        ((("customers", "customer_id"), ("orders", "customer_id")),),
    ),
    (
        "three_table_chain",
        "SELECT c.region, SUM(i.qty) FROM customers AS c "
        "JOIN orders AS o ON c.customer_id = o.customer_id "
        "JOIN items AS i ON o.order_id = i.order_id GROUP BY c.region",
        ("customers", "orders", "items"),
        (
            ("customers", "region"),
            ("items", "qty"),
            ("customers", "customer_id"),
            ("orders", "customer_id"),
            ("orders", "order_id"),
            ("items", "order_id"),
        ),
        (
            (("customers", "customer_id"), ("orders", "customer_id")),
            (("orders", "order_id"), ("items", "order_id")),
        ),
    ),
    (
        "join_plus_filters",
        "SELECT o.amount FROM orders o "
        "JOIN customers c ON o.customer_id = c.customer_id "
        "WHERE c.region = 'east' AND o.status = 'closed'",
        ("orders", "customers"),
        (
            ("orders", "amount"),
            ("orders", "customer_id"),
            ("customers", "customer_id"),
            ("customers", "region"),
            ("orders", "status"),
        ),
        ((("orders", "customer_id"), ("customers", "customer_id")),),
    ),
    (
        "derived_table",
        "SELECT t.total FROM (SELECT SUM(amount) AS total FROM orders) t",
        ("orders",),
        (("orders", "amount"),),
        (),
    ),
    (
        "derived_table_with_join",
        "SELECT d.customer_id FROM (SELECT o.customer_id FROM orders o "
        "JOIN customers c ON o.customer_id = c.customer_id) AS d",
        ("orders", "customers"),
        (("orders", "customer_id"), ("customers", "customer_id")),
        ((("orders", "customer_id"), ("customers", "customer_id")),),
    ),
    (
        "in_subquery",
        "SELECT name FROM customers WHERE customer_id IN "
        "(SELECT customer_id FROM orders WHERE status = 'open')",
        ("customers", "orders"),
        (
            ("customers", "name"),
            ("customers", "customer_id"),
            ("orders", "customer_id"),
            ("orders", "status"),
        ),
        (),
    ),
    (
        "correlated_exists",
        "SELECT c.name FROM customers c WHERE EXISTS "
        "(SELECT 1 FROM orders o WHERE o.customer_id = c.customer_id)",
        ("customers", "orders"),
        (
            ("customers", "name"),
            ("orders", "customer_id"),
            ("customers", "customer_id"),
        ),
        ((("orders", "customer_id"), ("customers", "customer_id")),),
    ),
    (
        "scalar_subquery",
        "SELECT name, (SELECT COUNT(*) FROM orders "
        "WHERE orders.customer_id = customers.customer_id) FROM customers",
        ("customers", "orders"),
        (
            ("customers", "name"),
            ("orders", "customer_id"),
            ("customers", "customer_id"),
        ),
        ((("orders", "customer_id"), ("customers", "customer_id")),),
    ),
    (
        "single_cte",
        "WITH big AS (SELECT order_id FROM orders WHERE amount > 100) "
        "SELECT COUNT(*) FROM big",
        ("orders",),
        (("orders", "order_id"), ("orders", "amount")),
        (),
    ),
    (
        "two_ctes_joined",
        "WITH o1 AS (SELECT customer_id FROM orders WHERE status = 'open'), "
        "c1 AS (SELECT customer_id, region FROM customers) "
        "SELECT c1.region FROM o1 JOIN c1 ON o1.customer_id = c1.customer_id",
        ("orders", "customers"),
        (
            ("orders", "customer_id"),
            ("orders", "status"),
            ("customers", "customer_id"),
            ("customers", "region"),
        ),
        (),
    ),
    (
        "cte_mixed_with_physical",
        "WITH top_customers AS (SELECT customer_id FROM orders "
        "GROUP BY customer_id HAVING SUM(amount) > 500) "
        "SELECT c.name FROM customers c "
        "JOIN top_customers t ON c.customer_id = t.customer_id",
        ("orders", "customers"),
        (
            ("orders", "customer_id"),
            ("orders", "amount"),
            ("customers", "name"),
            ("customers", "customer_id"),
        ),
        (),
    ),
    (
        "union",
        "SELECT customer_id FROM orders UNION SELECT customer_id FROM customers",
        ("orders", "customers"),
        (("orders", "customer_id"), ("customers", "customer_id")),
        (),
    ),
    (
        "order_limit_offset",
        "SELECT name FROM customers ORDER BY name DESC LIMIT 10 OFFSET 5",
        ("customers",),
        (("customers", "name"),),
        (),
    ),
    (
        "order_by_select_alias",
        "SELECT SUM(amount) AS total FROM orders "
        "GROUP BY customer_id ORDER BY total DESC",
        ("orders",),
        (("orders", "amount"), ("orders", "customer_id")),
        (),
    ),
    (
        "case_between_like_null",
        "SELECT CASE WHEN amount BETWEEN 10 AND 20 THEN 'mid' ELSE 'other' END "
        "FROM orders WHERE status LIKE 'o%' AND order_date IS NOT NULL",
        ("orders",),
        (("orders", "amount"), ("orders", "status"), ("orders", "order_date")),
        (),
    ),
    (
        "cast_and_dialect_function",
        "SELECT CAST(amount AS integer), SAFE_DIVIDE(amount, qty) FROM orders "
        "JOIN items ON orders.order_id = items.order_id",
        ("orders", "items"),
        (("orders", "amount"), ("items", "qty"), ("orders", "order_id"),
         ("items", "order_id")),
        ((("orders", "order_id"), ("items", "order_id")),),
    ),
    (
        "qualified_star",
        "SELECT o.* FROM orders o",
        ("orders",),
        (),
        (),
    ),
    (
        "distinct",
        "SELECT DISTINCT region FROM customers",
        ("customers",),
        (("customers", "region"),),
        (),
    ),
    (
        "nested_subqueries",
        "SELECT x FROM a WHERE id IN (SELECT aid FROM b WHERE y = "
        "(SELECT MAX(bid) FROM c))",
        ("a", "b", "c"),
        (("a", "x"), ("a", "id"), ("b", "aid"), ("b", "y"), ("c", "bid")),
        (),
    ),
    (
        "recursive_cte",
        "WITH RECURSIVE seq AS (SELECT order_id FROM orders "
        "UNION ALL SELECT order_id FROM seq) SELECT COUNT(*) FROM seq",
        ("orders",),
        (("orders", "order_id"),),
        (),
    ),
]
