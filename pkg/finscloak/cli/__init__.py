"""
命令行

validate | trace | field | plot 四个子命令，以及配置加载与文本格式读写。
"""
