from fractions import Fraction
from typing import Any, Optional, Dict, List, Union


def replace_undefined_value(item, value):
    return item if item is not None else value


def create_list(class_type: Any, obj: Optional[Union[Dict[str, Any], List[Any]]], *args) -> List[Any]:
    if obj is None:
        return []
    else:
        if type(obj) is list:
            new_list = [class_type.from_dict(y, *args) for y in obj]
        elif type(obj) is dict:
            new_list = [class_type.from_dict(obj, *args)]
        else:
            raise TypeError(f"The type of the object of {class_type} is ill defined")
        new_list = [item for item in new_list if item is not None]
        return new_list


def parse_rational(text: Union[str, int, float, Fraction]) -> Fraction:
    """Read '1/2', '3', '0.25' or a number as an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        return Fraction(text).limit_denominator(10 ** 9)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as error:
        raise ValueError(f"Rational value {text} is not defined") from error


def parse_params(text: Optional[str]) -> Dict[str, float]:
    """Read 'a=1,b=2.5' into a parameter dict."""
    if text is None or text.strip() == "":
        return {}
    params = {}
    for item in text.split(","):
        if "=" not in item:
            raise ValueError(f"Parameter {item} is not of the form name=value")
        name, value = item.split("=", 1)
        params[name.strip()] = float(value)
    return params


def parse_point(text: str) -> List[float]:
    """Read 'x,y,z' into a list of floats."""
    try:
        return [float(component) for component in text.split(",")]
    except ValueError as error:
        raise ValueError(f"Point {text} is not a comma separated list of numbers") from error


def format_float(value: float) -> float:
    # fixed precision keeps serialized reports byte-identical across platforms
    return float(f"{value:.12e}")
